/* tslint:disable */
/* eslint-disable */

/**
 * A map parsed from TOML with a verified filtration radius.
 */
export class Demo {
    free(): void;
    [Symbol.dispose](): void;
    /**
     * Gray basin image of the square `[-half, half]^2`, row-major from the top.
     */
    basins(size: number, half: number): Uint8Array;
    det(): number;
    /**
     * Searches for attracting cycles of period up to `kmax`; returns how many.
     */
    find_attractors(kmax: number): number;
    /**
     * Gray image of `G+` (or `G-`) over the same square.
     */
    green(size: number, half: number, forward: boolean): Uint8Array;
    constructor(config: string);
    /**
     * Pressure of the unstable weight at period `kmax` on `n` points of
     * `[0, 2]`, followed by the root of the last census.
     */
    pressure(kmax: number, n: number): Float64Array;
    radius(): number;
}

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_demo_free: (a: number, b: number) => void;
    readonly demo_basins: (a: number, b: number, c: number) => [number, number];
    readonly demo_det: (a: number) => number;
    readonly demo_find_attractors: (a: number, b: number) => number;
    readonly demo_green: (a: number, b: number, c: number, d: number) => [number, number];
    readonly demo_new: (a: number, b: number) => [number, number, number];
    readonly demo_pressure: (a: number, b: number, c: number) => [number, number, number, number];
    readonly demo_radius: (a: number) => number;
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
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
