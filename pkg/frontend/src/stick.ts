/** Pointer-to-grip-force mapping for the stick widget.
 *
 * The widget is a force surrogate: drag position maps linearly to grip
 * force (widget edge = 27 lbf), the vector magnitude is clamped to the
 * device limit, and release snaps the force to zero. */

import { clampGrip, GRIP_LIMIT_LBF } from './types.js';

export interface WidgetRect {
    left: number;
    top: number;
    width: number;
    height: number;
}

export interface GripForce {
    pitch: number;
    roll: number;
}

/** Map a pointer position inside the widget to a clamped grip force.
 * Dragging to the top edge commands +27 lbf pitch (aft pull). */
export function pointToForce(rect: WidgetRect, clientX: number, clientY: number): GripForce {
    const cx = rect.left + rect.width / 2;
    const cy = rect.top + rect.height / 2;
    const nx = Math.min(1, Math.max(-1, (clientX - cx) / (rect.width / 2)));
    const ny = Math.min(1, Math.max(-1, (cy - clientY) / (rect.height / 2)));
    return clampGrip(ny * GRIP_LIMIT_LBF, nx * GRIP_LIMIT_LBF);
}

export const ZERO_FORCE: GripForce = { pitch: 0, roll: 0 };

type ForceListener = (force: GripForce) => void;

/** Tracks one pointer drag on the stick widget and reports grip force. */
export class StickInput {
    private dragging = false;
    force: GripForce = ZERO_FORCE;

    constructor(private readonly listener: ForceListener,
        private rectProvider: () => WidgetRect) { }

    pointerDown(clientX: number, clientY: number): void {
        this.dragging = true;
        this.pointerMove(clientX, clientY);
    }

    pointerMove(clientX: number, clientY: number): void {
        if (!this.dragging) return;
        this.force = pointToForce(this.rectProvider(), clientX, clientY);
        this.listener(this.force);
    }

    /** Release: the stick force snaps to zero. */
    pointerUp(): void {
        if (!this.dragging) return;
        this.dragging = false;
        this.force = ZERO_FORCE;
        this.listener(this.force);
    }

    get isDragging(): boolean {
        return this.dragging;
    }
}
