/* tslint:disable */
/* eslint-disable */

/**
 * Sampled curve with an optional second series on the same abscissae.
 */
export class Curve {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    /**
     * Uncertainty, integer staircase or numeric levels, depending on the view.
     */
    readonly extra: Float64Array;
    /**
     * A scalar drawn as a guide line (e.g. the analytic phase over pi).
     */
    readonly reference: number;
    readonly xs: Float64Array;
    readonly ys: Float64Array;
}

export function crossSection(alpha: number, k: number, per_side: number): Curve;

export function spectrum(m: number, alpha: number, levels: number): Curve;

export function staircase(m: number, alpha: number, omega: number, ratio: number, e_max: number, samples: number): Curve;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_curve_free: (a: number, b: number) => void;
    readonly crossSection: (a: number, b: number, c: number) => [number, number, number];
    readonly curve_extra: (a: number) => [number, number];
    readonly curve_reference: (a: number) => number;
    readonly curve_xs: (a: number) => [number, number];
    readonly curve_ys: (a: number) => [number, number];
    readonly spectrum: (a: number, b: number, c: number) => [number, number, number];
    readonly staircase: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number];
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
