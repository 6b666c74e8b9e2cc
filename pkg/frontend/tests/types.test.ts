import { describe, expect, it } from 'vitest';
import { clampGrip, parseStateFrame } from '../src/types.js';
import { makeFrame } from './fixtures.js';

describe('parseStateFrame', () => {
    it('accepts a complete frame', () => {
        const frame = parseStateFrame(JSON.stringify(makeFrame()));
        expect(frame).not.toBeNull();
        expect(frame!.alpha_deg).toBe(4.0);
    });

    it('discards partial frames', () => {
        const complete = makeFrame() as unknown as Record<string, unknown>;
        for (const key of ['attitude_deg', 'limits', 'stick', 'ffc',
            'protection', 'alpha_bar', 't']) {
            const partial = { ...complete };
            delete partial[key];
            expect(parseStateFrame(JSON.stringify(partial))).toBeNull();
        }
    });

    it('discards frames with non-numeric fields', () => {
        const bad = makeFrame() as unknown as Record<string, unknown>;
        bad.alpha_deg = 'high';
        expect(parseStateFrame(JSON.stringify(bad))).toBeNull();
    });

    it('discards non-state and unparseable payloads', () => {
        expect(parseStateFrame('{"type":"error","reason":"x"}')).toBeNull();
        expect(parseStateFrame('not json')).toBeNull();
        expect(parseStateFrame('42')).toBeNull();
    });

    it('discards degenerate ffc curves', () => {
        const bad = makeFrame();
        (bad.ffc.pitch as unknown as number[][]) = [[0, 0]];
        expect(parseStateFrame(JSON.stringify(bad))).toBeNull();
    });
});

describe('clampGrip', () => {
    it('passes small forces through', () => {
        expect(clampGrip(10, -5)).toEqual({ pitch: 10, roll: -5 });
    });

    it('clamps the vector magnitude to 27 lbf', () => {
        const out = clampGrip(27, 27);
        expect(Math.hypot(out.pitch, out.roll)).toBeCloseTo(27, 9);
        expect(out.pitch).toBeCloseTo(out.roll, 9);
    });

    it('keeps an on-axis pull at the full 27 lbf', () => {
        expect(clampGrip(27, 0)).toEqual({ pitch: 27, roll: 0 });
    });
});
