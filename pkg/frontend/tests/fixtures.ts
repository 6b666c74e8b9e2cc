import { StateFrame } from '../src/types.js';

/** A complete, internally consistent state frame for tests. */
export function makeFrame(overrides: Partial<StateFrame> = {}): StateFrame {
    const base: StateFrame = {
        type: 'state',
        t: 1.25,
        seq: 40,
        wall_ms: 1000.0,
        attitude_deg: { phi: 5.0, theta: 4.0, psi: 0.0 },
        rates_dps: { p: 0.0, q: 1.0, r: 0.0 },
        alpha_deg: 4.0,
        beta_deg: 0.0,
        nz_g: 1.0,
        qbar_psf: 219.4,
        airspeed_fps: 500.0,
        altitude_ft: 10000.0,
        limits: {
            alpha_max_deg: 25.0, alpha_min_deg: -10.0,
            nz_max_g: 9.0, nz_min_g: -3.0, phi_max_deg: 60.0,
            q_max_dps: 40.0, p_max_dps: 170.0,
        },
        alpha_bar: 0.16,
        phi_bar: 0.08,
        stick: {
            pitch: { theta_deg: 0.0, force_lbf: 0.0 },
            roll: { theta_deg: 0.0, force_lbf: 0.0 },
        },
        ffc: {
            pitch: [[-24, -27], [0, 0], [24, 27]],
            roll: [[-24, -27], [0, 0], [24, 27]],
        },
        protection: { enabled: true, rate: false, longitudinal: false, lateral: false },
        acs_mode: 'enabled',
    };
    return { ...base, ...overrides };
}
