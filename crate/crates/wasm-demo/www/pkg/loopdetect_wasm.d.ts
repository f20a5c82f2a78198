/* tslint:disable */
/* eslint-disable */

/**
 * Collision probability curve for one id width, sampled at
 * `2^0, 2^(1/steps), ...` up to `2^max_log2` routers. Returned flat as
 * `[n, p_exact, p_approx]` triples.
 */
export function collisionCurve(id_bits: number, max_log2: number, steps_per_octave: number): Float64Array;

/**
 * Detection hop of the tortoise header for every cycle length `1..=max_lambda`
 * behind a tail of `mu`, flat as `[lambda, brent_hop, ttl_hop]` triples.
 */
export function latencySweep(mu: number, max_lambda: number, ttl: number): Float64Array;

export function predictDetectionHop(mu: number, lambda: number): number;

/**
 * Trace CSV for a packet originated at the tail end of a rho topology.
 */
export function simulateRho(mu: number, lambda: number, seed: bigint): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly collisionCurve: (a: number, b: number, c: number) => [number, number];
    readonly latencySweep: (a: number, b: number, c: number) => [number, number];
    readonly predictDetectionHop: (a: number, b: number) => number;
    readonly simulateRho: (a: number, b: number, c: bigint) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __externref_table_dealloc: (a: number) => void;
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
