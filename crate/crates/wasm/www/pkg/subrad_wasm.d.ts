/* tslint:disable */
/* eslint-disable */

/**
 * Smallest decay rate for `N = n_min..=n_max`, stride 4:
 * `[N, numeric, ideal closed form, deep-subwavelength closed form]`.
 * A closed form outside its regime is `NaN`.
 */
export function decay_scaling(spacing: number, gamma: number, n_min: number, n_max: number): Float64Array;

/**
 * `[center, fwhm]` of the tracked feature.
 */
export function feature(n: number, spacing: number, gamma: number): Float64Array;

/**
 * Collective modes sorted by decay, stride 2: `[shift, decay]`.
 */
export function modes(n: number, spacing: number, gamma: number): Float64Array;

/**
 * Spectrum around the tracked feature, stride 4:
 * `[detuning, T, R, loss]`. The window spans `half_window` decay rates of
 * the targeted mode on each side of its shift.
 */
export function spectrum(n: number, spacing: number, gamma: number, half_window: number, points: number): Float64Array;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly decay_scaling: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly feature: (a: number, b: number, c: number) => [number, number, number, number];
    readonly modes: (a: number, b: number, c: number) => [number, number, number, number];
    readonly spectrum: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
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
