/** Pure mapping from a complete state frame to everything the gauges draw.
 * Keeping this free of DOM makes the dashboard rendering testable. */

import { StateFrame, STICK_TRAVEL_DEG } from './types.js';

export interface TapeView {
    value: number;
    lo: number;            // tape bottom value
    hi: number;            // tape top value
    fraction: number;      // pointer position, 0 (lo) .. 1 (hi)
    limitLowFraction: number | null;
    limitHighFraction: number | null;
    exceeded: boolean;     // beyond either red bar
}

export interface ArcView {
    fraction: number;      // 0 .. 1 of the normalized indicator, clamped
    overLimit: boolean;    // indicator at or past 1
}

export interface StickView {
    x: number;             // -1 .. 1, roll deflection / full travel
    y: number;             // -1 .. 1, pitch deflection / full travel
    forcePitch: number;
    forceRoll: number;
}

export interface FfcPlotView {
    points: Array<[number, number]>;
    operating: [number, number];   // current (theta, holding force estimate)
}

export interface DashboardViewModel {
    t: number;
    attitude: { rollDeg: number; pitchDeg: number; headingDeg: number };
    alphaTape: TapeView;
    nzTape: TapeView;
    phiTape: TapeView;
    alphaArc: ArcView;
    phiArc: ArcView;
    badges: { protection: boolean; longitudinal: boolean; lateral: boolean; rate: boolean };
    acsMode: string;
    stick: StickView;
    ffcPitch: FfcPlotView;
    ffcRoll: FfcPlotView;
    airspeed: number;
    altitude: number;
    nz: number;
}

function frac(value: number, lo: number, hi: number): number {
    return Math.min(1, Math.max(0, (value - lo) / (hi - lo)));
}

function tape(value: number, lo: number, hi: number,
    limitLow: number | null, limitHigh: number | null): TapeView {
    const exceeded = (limitHigh !== null && value > limitHigh)
        || (limitLow !== null && value < limitLow);
    return {
        value, lo, hi,
        fraction: frac(value, lo, hi),
        limitLowFraction: limitLow === null ? null : frac(limitLow, lo, hi),
        limitHighFraction: limitHigh === null ? null : frac(limitHigh, lo, hi),
        exceeded,
    };
}

function interpolateCurve(points: number[][], theta: number): number {
    if (theta <= points[0][0]) return points[0][1];
    const last = points[points.length - 1];
    if (theta >= last[0]) return last[1];
    for (let i = 1; i < points.length; i++) {
        if (theta <= points[i][0]) {
            const [p0, f0] = points[i - 1];
            const [p1, f1] = points[i];
            return f0 + (f1 - f0) * (theta - p0) / (p1 - p0);
        }
    }
    return last[1];
}

function ffcPlot(points: number[][], thetaDeg: number): FfcPlotView {
    return {
        points: points.map((p) => [p[0], p[1]] as [number, number]),
        operating: [thetaDeg, interpolateCurve(points, thetaDeg)],
    };
}

export function buildViewModel(frame: StateFrame): DashboardViewModel {
    const lim = frame.limits;
    return {
        t: frame.t,
        attitude: {
            rollDeg: frame.attitude_deg.phi,
            pitchDeg: frame.attitude_deg.theta,
            headingDeg: frame.attitude_deg.psi,
        },
        alphaTape: tape(frame.alpha_deg, lim.alpha_min_deg - 5, lim.alpha_max_deg + 10,
            lim.alpha_min_deg, lim.alpha_max_deg),
        nzTape: tape(frame.nz_g, lim.nz_min_g - 1, lim.nz_max_g + 2,
            lim.nz_min_g, lim.nz_max_g),
        phiTape: tape(frame.attitude_deg.phi, -lim.phi_max_deg - 30,
            lim.phi_max_deg + 30, -lim.phi_max_deg, lim.phi_max_deg),
        alphaArc: {
            fraction: Math.min(1, Math.max(0, frame.alpha_bar)),
            overLimit: frame.alpha_bar >= 1,
        },
        phiArc: {
            fraction: Math.min(1, Math.max(0, frame.phi_bar)),
            overLimit: frame.phi_bar >= 1,
        },
        badges: {
            protection: frame.protection.enabled,
            longitudinal: frame.protection.longitudinal,
            lateral: frame.protection.lateral,
            rate: frame.protection.rate,
        },
        acsMode: frame.acs_mode,
        stick: {
            x: Math.min(1, Math.max(-1, frame.stick.roll.theta_deg / STICK_TRAVEL_DEG)),
            y: Math.min(1, Math.max(-1, frame.stick.pitch.theta_deg / STICK_TRAVEL_DEG)),
            forcePitch: frame.stick.pitch.force_lbf,
            forceRoll: frame.stick.roll.force_lbf,
        },
        ffcPitch: ffcPlot(frame.ffc.pitch, frame.stick.pitch.theta_deg),
        ffcRoll: ffcPlot(frame.ffc.roll, frame.stick.roll.theta_deg),
        airspeed: frame.airspeed_fps,
        altitude: frame.altitude_ft,
        nz: frame.nz_g,
    };
}
