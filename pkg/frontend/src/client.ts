/** Telemetry client: latest-complete-frame slot, staleness tracking, and the
 * 60 Hz on-change command sender.
 *
 * The WebSocket and the clock are injected so every behavior is testable
 * without a browser or a server. */

import { CommandFrame, parseStateFrame, StateFrame } from './types.js';
import { GripForce } from './stick.js';

export interface SocketLike {
    send(data: string): void;
    close(): void;
    readyState: number;
}

export const SOCKET_OPEN = 1;

export interface ClientOptions {
    sendHz?: number;
    staleAfterMs?: number;
    latencyDisableMs?: number;
    now?: () => number;          // ms clock, injectable for tests
}

export class CockpitClient {
    latest: StateFrame | null = null;
    private lastFrameAt: number | null = null;
    private lastSentPayload: string | null = null;
    private held: { grip: GripForce; pedal: number; throttle: number | null } = {
        grip: { pitch: 0, roll: 0 }, pedal: 0, throttle: null,
    };
    private socket: SocketLike | null = null;
    private readonly now: () => number;
    readonly sendIntervalMs: number;
    readonly staleAfterMs: number;
    readonly latencyDisableMs: number;
    latencyMs: number | null = null;
    framesDiscarded = 0;

    constructor(options: ClientOptions = {}) {
        this.now = options.now ?? (() => Date.now());
        this.sendIntervalMs = 1000 / (options.sendHz ?? 60);
        this.staleAfterMs = options.staleAfterMs ?? 1000;
        this.latencyDisableMs = options.latencyDisableMs ?? 400;
    }

    attach(socket: SocketLike): void {
        this.socket = socket;
        this.lastSentPayload = null;
    }

    /** Ingest one raw message; partial frames are counted and dropped. */
    onMessage(raw: string): StateFrame | null {
        const frame = parseStateFrame(raw);
        if (frame === null) {
            // error frames from the server are not state; ignore quietly
            try {
                const obj = JSON.parse(raw);
                if (obj && obj.type === 'error') return null;
            } catch { /* fall through */ }
            this.framesDiscarded += 1;
            return null;
        }
        this.latest = frame;
        this.lastFrameAt = this.now();
        this.latencyMs = this.now() - frame.wall_ms;
        return frame;
    }

    /** True when no complete frame arrived within the staleness window. */
    isStale(): boolean {
        if (this.lastFrameAt === null) return true;
        return this.now() - this.lastFrameAt > this.staleAfterMs;
    }

    /** Inputs are disabled when the stream is stale or lag is excessive. */
    inputsEnabled(): boolean {
        if (this.isStale()) return false;
        return this.latencyMs === null || this.latencyMs <= this.latencyDisableMs;
    }

    setGrip(force: GripForce): void {
        this.held.grip = force;
    }

    setPedal(value: number): void {
        this.held.pedal = Math.min(1, Math.max(-1, value));
    }

    setThrottle(value: number): void {
        this.held.throttle = Math.min(1, Math.max(0, value));
    }

    /** Periodic tick (60 Hz): sends the held inputs only when they changed. */
    tick(): boolean {
        if (this.socket === null || this.socket.readyState !== SOCKET_OPEN) return false;
        if (!this.inputsEnabled()) return false;
        const frame: CommandFrame = {
            type: 'command',
            grip: { pitch: this.held.grip.pitch, roll: this.held.grip.roll },
            pedal: this.held.pedal,
        };
        if (this.held.throttle !== null) frame.throttle = this.held.throttle;
        const payload = JSON.stringify(frame);
        if (payload === this.lastSentPayload) return false;
        this.socket.send(payload);
        this.lastSentPayload = payload;
        return true;
    }

    /** One-off event frames (toggle, mode request, reset) send immediately. */
    sendEvent(event: Partial<CommandFrame>): boolean {
        if (this.socket === null || this.socket.readyState !== SOCKET_OPEN) return false;
        const frame: CommandFrame = { type: 'command', ...event };
        this.socket.send(JSON.stringify(frame));
        return true;
    }

    /** Best-effort zero-force frame, e.g. before closing mid-drag. */
    sendZeroForce(): void {
        if (this.socket === null || this.socket.readyState !== SOCKET_OPEN) return;
        this.socket.send(JSON.stringify({
            type: 'command', grip: { pitch: 0, roll: 0 },
        }));
    }

    close(): void {
        if (this.socket !== null) {
            this.sendZeroForce();
            this.socket.close();
            this.socket = null;
        }
    }
}
