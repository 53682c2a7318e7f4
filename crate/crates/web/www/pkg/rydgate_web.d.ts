/* tslint:disable */
/* eslint-disable */

/**
 * Optimized uniform-blockade error for k = 1..=k_max.
 */
export function budget_vs_k(b_mhz: number, tau_us: number, k_max: number): string;

/**
 * Square-lattice sites for k controls.
 */
export function lattice_layout(d_um: number, k: number): string;

/**
 * Error terms on a log grid of Rabi frequencies at fixed k.
 */
export function omega_sweep(b_mhz: number, tau_us: number, k: number, start_mhz: number, stop_mhz: number, points: number): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly budget_vs_k: (a: number, b: number, c: number) => [number, number, number, number];
    readonly lattice_layout: (a: number, b: number) => [number, number, number, number];
    readonly omega_sweep: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_start: () => void;
}

export type SyncInitInput = BufferSource | WebAssembly.Module;

/**
 * Instantiates the given `module`, which can either be bytes or
 * a precompiled `WebAssembly.Module`.
 *
 * @param {{ module: SyncInitInput }} module - Passing `SyncInitInput` directly is deprecated.
 *
 * @returns {InitOutput}
 */
export function initSync(module: { module: SyncInitInput } | SyncInitInput): InitOutput;

/**
 * If `module_or_path` is {RequestInfo} or {URL}, makes a request and
 * for everything else, calls `WebAssembly.instantiate` directly.
 *
 * @param {{ module_or_path: InitInput | Promise<InitInput> }} module_or_path - Passing `InitInput` directly is deprecated.
 *
 * @returns {Promise<InitOutput>}
 */
export default function __wbg_init (module_or_path?: { module_or_path: InitInput | Promise<InitInput> } | InitInput | Promise<InitInput>): Promise<InitOutput>;
