/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_profile1d_free: (a: number, b: number) => void;
export const __wbg_profile3d_free: (a: number, b: number) => void;
export const profile1d: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number];
export const profile1d_b2: (a: number) => [number, number];
export const profile1d_e2: (a: number) => [number, number];
export const profile1d_fwhm: (a: number) => number;
export const profile1d_peak_location: (a: number) => number;
export const profile1d_rho: (a: number) => [number, number];
export const profile1d_x: (a: number) => [number, number];
export const profile3d: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number];
export const profile3d_casimir_constant: (a: number) => number;
export const profile3d_delta_rho: (a: number) => [number, number];
export const profile3d_peak_location: (a: number) => number;
export const profile3d_rho0: (a: number) => [number, number];
export const profile3d_x: (a: number) => [number, number];
export const spectrum: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number) => [number, number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
