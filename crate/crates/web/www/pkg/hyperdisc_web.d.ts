/* tslint:disable */
/* eslint-disable */

/**
 * Squared norm of each V_i component.
 */
export function decomposition_energy(kind: string, n: number, k: number, seed: number): string;

/**
 * Histogram of ⟨w_π, u⟩ over all permutations of a demo pair.
 */
export function intersection_histogram(kind: string, n: number, bins: number, seed: number): string;

/**
 * Mean W-vector of random hypergraphs for each n in a range.
 */
export function wvector_scaling(k: number, p: number, n_min: number, n_max: number, samples: number, seed: number): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly decomposition_energy: (a: number, b: number, c: number, d: number, e: number) => [number, number];
    readonly intersection_histogram: (a: number, b: number, c: number, d: number, e: number) => [number, number];
    readonly wvector_scaling: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
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
