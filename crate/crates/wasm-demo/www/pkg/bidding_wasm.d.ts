/* tslint:disable */
/* eslint-disable */

/**
 * Richman value, threshold spread, optimal bid and optimal moves at
 * `position` (an encoding, or empty for the start) of `ttt`, `hex:2` or
 * `hex:3`. Draws count `draw_value` toward the threshold.
 */
export function explore(game: string, position: string, draw_value: string): string;

/**
 * Monte Carlo pivotal probability of every empty cell of a `size`×`size`
 * Hex position, from `samples` random completions.
 */
export function heatmap(size: number, position: string, samples: number, seed: number): string;

/**
 * Resolves sealed-bid rounds from the chip state `start`, written the way
 * transcripts write chips (Alice first, `*` on the tiebreak holder). Each line of
 * `rounds` is `<alice bid> <bob bid>`, a trailing `*` spending the tiebreak
 * chip.
 */
export function ledger(start: string, rounds: string): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly explore: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number];
    readonly heatmap: (a: number, b: number, c: number, d: number, e: number) => [number, number];
    readonly ledger: (a: number, b: number, c: number, d: number) => [number, number];
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
