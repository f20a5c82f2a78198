/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const collisionCurve: (a: number, b: number, c: number) => [number, number];
export const latencySweep: (a: number, b: number, c: number) => [number, number];
export const predictDetectionHop: (a: number, b: number) => number;
export const simulateRho: (a: number, b: number, c: bigint) => [number, number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_start: () => void;
