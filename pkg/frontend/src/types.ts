/** Telemetry frame shapes shared with the simulation server. */

export interface StickAxisTelemetry {
    theta_deg: number;
    force_lbf: number;
}

export interface StateFrame {
    type: 'state';
    t: number;
    seq: number;
    wall_ms: number;
    attitude_deg: { phi: number; theta: number; psi: number };
    rates_dps: { p: number; q: number; r: number };
    alpha_deg: number;
    beta_deg: number;
    nz_g: number;
    qbar_psf: number;
    airspeed_fps: number;
    altitude_ft: number;
    limits: {
        alpha_max_deg: number;
        alpha_min_deg: number;
        nz_max_g: number;
        nz_min_g: number;
        phi_max_deg: number;
        q_max_dps: number;
        p_max_dps: number;
    };
    alpha_bar: number;
    phi_bar: number;
    stick: { pitch: StickAxisTelemetry; roll: StickAxisTelemetry };
    ffc: { pitch: number[][]; roll: number[][] };
    protection: { enabled: boolean; rate: boolean; longitudinal: boolean; lateral: boolean };
    acs_mode: 'disabled' | 'enabled' | 'jammed';
}

export interface CommandFrame {
    type: 'command';
    grip?: { pitch?: number; roll?: number };
    pedal?: number;
    throttle?: number;
    protection?: boolean;
    acs_mode?: 'disabled' | 'enabled' | 'jammed';
    reset?: boolean;
}

export const GRIP_LIMIT_LBF = 27;
export const STICK_TRAVEL_DEG = 24;

function isNum(x: unknown): x is number {
    return typeof x === 'number' && Number.isFinite(x);
}

function hasNums(obj: unknown, keys: string[]): boolean {
    if (typeof obj !== 'object' || obj === null) return false;
    const rec = obj as Record<string, unknown>;
    return keys.every((k) => isNum(rec[k]));
}

/**
 * Strict parse of an incoming state frame. Partial or malformed frames are
 * discarded (null): the dashboard only ever renders complete frames.
 */
export function parseStateFrame(raw: unknown): StateFrame | null {
    let data: unknown = raw;
    if (typeof raw === 'string') {
        try {
            data = JSON.parse(raw);
        } catch {
            return null;
        }
    }
    if (typeof data !== 'object' || data === null) return null;
    const f = data as Record<string, unknown>;
    if (f.type !== 'state') return null;
    if (!isNum(f.t) || !isNum(f.seq) || !isNum(f.wall_ms)) return null;
    if (!hasNums(f.attitude_deg, ['phi', 'theta', 'psi'])) return null;
    if (!hasNums(f.rates_dps, ['p', 'q', 'r'])) return null;
    if (!isNum(f.alpha_deg) || !isNum(f.beta_deg) || !isNum(f.nz_g)) return null;
    if (!isNum(f.qbar_psf) || !isNum(f.airspeed_fps) || !isNum(f.altitude_ft)) return null;
    if (!hasNums(f.limits, ['alpha_max_deg', 'alpha_min_deg', 'nz_max_g',
        'nz_min_g', 'phi_max_deg', 'q_max_dps', 'p_max_dps'])) return null;
    if (!isNum(f.alpha_bar) || !isNum(f.phi_bar)) return null;
    const stick = f.stick as Record<string, unknown> | undefined;
    if (!stick || !hasNums(stick.pitch, ['theta_deg', 'force_lbf'])
        || !hasNums(stick.roll, ['theta_deg', 'force_lbf'])) return null;
    const ffc = f.ffc as Record<string, unknown> | undefined;
    const curveOk = (pts: unknown) => Array.isArray(pts) && pts.length >= 2
        && pts.every((p) => Array.isArray(p) && p.length === 2
            && isNum(p[0]) && isNum(p[1]));
    if (!ffc || !curveOk(ffc.pitch) || !curveOk(ffc.roll)) return null;
    const prot = f.protection as Record<string, unknown> | undefined;
    if (!prot || typeof prot.enabled !== 'boolean' || typeof prot.rate !== 'boolean'
        || typeof prot.longitudinal !== 'boolean'
        || typeof prot.lateral !== 'boolean') return null;
    if (f.acs_mode !== 'disabled' && f.acs_mode !== 'enabled'
        && f.acs_mode !== 'jammed') return null;
    return data as StateFrame;
}

/** Clamp a grip-force vector to the 27 lbf device limit (by magnitude). */
export function clampGrip(pitch: number, roll: number): { pitch: number; roll: number } {
    const mag = Math.hypot(pitch, roll);
    if (mag <= GRIP_LIMIT_LBF || mag === 0) {
        return { pitch, roll };
    }
    const scale = GRIP_LIMIT_LBF / mag;
    return { pitch: pitch * scale, roll: roll * scale };
}
