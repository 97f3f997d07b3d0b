/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_closurecurves_free: (a: number, b: number) => void;
export const __wbg_interfaceprofile_free: (a: number, b: number) => void;
export const __wbg_simulation_free: (a: number, b: number) => void;
export const closure_curves: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number];
export const closurecurves_c_m: (a: number) => [number, number];
export const closurecurves_c_t: (a: number) => [number, number];
export const closurecurves_k_m: (a: number) => [number, number];
export const closurecurves_k_t: (a: number) => [number, number];
export const closurecurves_v: (a: number) => [number, number];
export const interfaceprofile_derivative_continuous: (a: number) => [number, number];
export const interfaceprofile_flux_continuous: (a: number) => [number, number];
export const interfaceprofile_max_error: (a: number) => number;
export const interfaceprofile_nodes: (a: number) => [number, number];
export const interfaceprofile_u: (a: number) => [number, number];
export const interfaceprofile_x: (a: number) => [number, number];
export const layer_count: (a: number, b: number) => [number, number, number];
export const simulation_final_time: (a: number) => number;
export const simulation_finished: (a: number) => number;
export const simulation_interfaces: (a: number) => [number, number];
export const simulation_mesh: (a: number) => [number, number];
export const simulation_new: (a: number, b: number, c: number) => [number, number, number];
export const simulation_step: (a: number, b: number) => [number, number];
export const simulation_time: (a: number) => number;
export const simulation_u: (a: number) => [number, number];
export const simulation_v: (a: number) => [number, number];
export const simulation_x: (a: number) => [number, number];
export const solve_interface: (a: number, b: number, c: number, d: number) => [number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
