/* tslint:disable */
/* eslint-disable */

export class Profile1D {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    readonly b2: Float64Array;
    /**
     * First-order `⟨E²⟩`, J/m.
     */
    readonly e2: Float64Array;
    readonly fwhm: number;
    readonly peak_location: number;
    readonly rho: Float64Array;
    readonly x: Float64Array;
}

export class Profile3D {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    readonly casimir_constant: number;
    readonly delta_rho: Float64Array;
    readonly peak_location: number;
    /**
     * Zeroth-order density without the constant `p_x = 0` offset, J/m³.
     */
    readonly rho0: Float64Array;
    readonly x: Float64Array;
}

export function profile1d(l0: number, mass: number, omega_osc: number, omega_cut: number, points: number, window: number): Profile1D;

export function profile3d(l0: number, side: number, mass: number, omega_osc: number, omega_cut: number, points: number): Profile3D;

export function spectrum(l0: number, side: number, mass: number, omega_osc: number, omega_cut: number, max_axial: number, m_y: number, m_z: number): Float64Array;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_profile1d_free: (a: number, b: number) => void;
    readonly __wbg_profile3d_free: (a: number, b: number) => void;
    readonly profile1d: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number];
    readonly profile1d_b2: (a: number) => [number, number];
    readonly profile1d_e2: (a: number) => [number, number];
    readonly profile1d_fwhm: (a: number) => number;
    readonly profile1d_peak_location: (a: number) => number;
    readonly profile1d_rho: (a: number) => [number, number];
    readonly profile1d_x: (a: number) => [number, number];
    readonly profile3d: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number];
    readonly profile3d_casimir_constant: (a: number) => number;
    readonly profile3d_delta_rho: (a: number) => [number, number];
    readonly profile3d_peak_location: (a: number) => number;
    readonly profile3d_rho0: (a: number) => [number, number];
    readonly profile3d_x: (a: number) => [number, number];
    readonly spectrum: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number) => [number, number, number, number];
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
