/* tslint:disable */
/* eslint-disable */

/**
 * Dimensionless capacities and conductivities of one material against `v`.
 */
export class ClosureCurves {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    c_m(): Float64Array;
    c_t(): Float64Array;
    k_m(): Float64Array;
    k_t(): Float64Array;
    v(): Float64Array;
}

/**
 * Collocation solution of the two-material benchmark next to both closed forms.
 */
export class InterfaceProfile {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    derivative_continuous(): Float64Array;
    flux_continuous(): Float64Array;
    max_error(): number;
    /**
     * Final adapted mesh.
     */
    nodes(): Float64Array;
    u(): Float64Array;
    x(): Float64Array;
}

/**
 * Layer-by-layer MOHL run of a wall preset.
 */
export class Simulation {
    free(): void;
    [Symbol.dispose](): void;
    final_time(): number;
    finished(): boolean;
    interfaces(): Float64Array;
    /**
     * Moisture mesh of the current layer.
     */
    mesh(): Float64Array;
    constructor(preset: string, tol: number);
    /**
     * Advances `layers` time layers, stopping at the final time.
     */
    step(layers: number): void;
    time(): number;
    u(): Float64Array;
    v(): Float64Array;
    x(): Float64Array;
}

export function closure_curves(preset: string, layer: number, v_lo: number, v_hi: number, points: number): ClosureCurves;

export function layer_count(preset: string): number;

export function solve_interface(k1: number, k2: number, tol: number, points: number): InterfaceProfile;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_closurecurves_free: (a: number, b: number) => void;
    readonly __wbg_interfaceprofile_free: (a: number, b: number) => void;
    readonly __wbg_simulation_free: (a: number, b: number) => void;
    readonly closure_curves: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number];
    readonly closurecurves_c_m: (a: number) => [number, number];
    readonly closurecurves_c_t: (a: number) => [number, number];
    readonly closurecurves_k_m: (a: number) => [number, number];
    readonly closurecurves_k_t: (a: number) => [number, number];
    readonly closurecurves_v: (a: number) => [number, number];
    readonly interfaceprofile_derivative_continuous: (a: number) => [number, number];
    readonly interfaceprofile_flux_continuous: (a: number) => [number, number];
    readonly interfaceprofile_max_error: (a: number) => number;
    readonly interfaceprofile_nodes: (a: number) => [number, number];
    readonly interfaceprofile_u: (a: number) => [number, number];
    readonly interfaceprofile_x: (a: number) => [number, number];
    readonly layer_count: (a: number, b: number) => [number, number, number];
    readonly simulation_final_time: (a: number) => number;
    readonly simulation_finished: (a: number) => number;
    readonly simulation_interfaces: (a: number) => [number, number];
    readonly simulation_mesh: (a: number) => [number, number];
    readonly simulation_new: (a: number, b: number, c: number) => [number, number, number];
    readonly simulation_step: (a: number, b: number) => [number, number];
    readonly simulation_time: (a: number) => number;
    readonly simulation_u: (a: number) => [number, number];
    readonly simulation_v: (a: number) => [number, number];
    readonly simulation_x: (a: number) => [number, number];
    readonly solve_interface: (a: number, b: number, c: number, d: number) => [number, number, number];
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
