/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const budget_vs_k: (a: number, b: number, c: number) => [number, number, number, number];
export const lattice_layout: (a: number, b: number) => [number, number, number, number];
export const omega_sweep: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
