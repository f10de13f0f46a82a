/* tslint:disable */
/* eslint-disable */

/**
 * Duct relative error for the polar corner decomposition and the
 * Cartesian one with `n_gl` Gauss-Laguerre points.
 */
export function duct_comparison(n_gl: number, omega_min: number, omega_max: number, count: number): string;

/**
 * Ellipsoid error against the closed form on `count` log-spaced
 * frequencies, for every radial rule size in `ms`.
 */
export function ellipsoid_error_curve(ms: Uint32Array, outer: number, omega_min: number, omega_max: number, count: number): string;

/**
 * Steepest-descent path out of the special point, sampled at `count`
 * points `p` in `(0, p_max]`. `scene` is `"ellipsoid"` (direction
 * `(phi_1, phi_2)` = `(a, b)`) or `"sphere"` (angle `a`, incidence `b`).
 */
export function trace_path(scene: string, omega: number, a: number, b: number, p_max: number, count: number): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly duct_comparison: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly ellipsoid_error_curve: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
    readonly trace_path: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
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
