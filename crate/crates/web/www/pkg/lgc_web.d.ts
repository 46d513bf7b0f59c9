/* tslint:disable */
/* eslint-disable */

/**
 * Isotypic components for the Levi with block sizes `levi` (empty for the Borel).
 */
export function components(n: number, f: number, levi: string): string;

/**
 * Characteristic cycles of the modules attached to a mod p representation
 * of kind `irred`, `split` or `nonsplit:<J>`.
 */
export function cycles(kind: string, f: number): string;

/**
 * Constituent graph. `shape` is `full`, `levi`, or extra roots `i-j,...` (1-based).
 */
export function diagram(n: number, f: number, levi: string, shape: string): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly components: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly cycles: (a: number, b: number, c: number) => [number, number, number, number];
    readonly diagram: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
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
