/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_curve_free: (a: number, b: number) => void;
export const crossSection: (a: number, b: number, c: number) => [number, number, number];
export const curve_extra: (a: number) => [number, number];
export const curve_reference: (a: number) => number;
export const curve_xs: (a: number) => [number, number];
export const curve_ys: (a: number) => [number, number];
export const spectrum: (a: number, b: number, c: number) => [number, number, number];
export const staircase: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
