/** Canvas drawing for the dashboard. All geometry comes from the view
 * model; nothing here reads simulation state directly. */

import { DashboardViewModel, TapeView, ArcView, FfcPlotView } from './viewmodel.js';

const SKY = '#3d6da8';
const GROUND = '#7a5230';
const RED = '#e23b3b';
const AMBER = '#e2a43b';
const GREEN = '#3be27a';
const INK = '#dfe7f0';
const GRID = '#37404b';

export function drawAttitude(ctx: CanvasRenderingContext2D, w: number, h: number,
    rollDeg: number, pitchDeg: number): void {
    const cx = w / 2;
    const cy = h / 2;
    const pxPerDeg = h / 60;
    ctx.save();
    ctx.beginPath();
    ctx.arc(cx, cy, Math.min(w, h) / 2 - 2, 0, Math.PI * 2);
    ctx.clip();
    ctx.translate(cx, cy);
    ctx.rotate(-rollDeg * Math.PI / 180);
    ctx.translate(0, pitchDeg * pxPerDeg);
    ctx.fillStyle = SKY;
    ctx.fillRect(-w, -h * 2, w * 2, h * 2);
    ctx.fillStyle = GROUND;
    ctx.fillRect(-w, 0, w * 2, h * 2);
    ctx.strokeStyle = INK;
    ctx.lineWidth = 2;
    ctx.beginPath();
    ctx.moveTo(-w, 0);
    ctx.lineTo(w, 0);
    ctx.stroke();
    ctx.lineWidth = 1;
    ctx.fillStyle = INK;
    for (let deg = -30; deg <= 30; deg += 10) {
        if (deg === 0) continue;
        const y = -deg * pxPerDeg;
        ctx.beginPath();
        ctx.moveTo(-30, y);
        ctx.lineTo(30, y);
        ctx.stroke();
        ctx.fillText(String(deg), 36, y + 3);
    }
    ctx.restore();
    // fixed aircraft symbol
    ctx.strokeStyle = '#ffd34d';
    ctx.lineWidth = 3;
    ctx.beginPath();
    ctx.moveTo(cx - 34, cy);
    ctx.lineTo(cx - 10, cy);
    ctx.moveTo(cx + 10, cy);
    ctx.lineTo(cx + 34, cy);
    ctx.moveTo(cx, cy - 4);
    ctx.lineTo(cx, cy + 4);
    ctx.stroke();
}

export function drawTape(ctx: CanvasRenderingContext2D, x: number, y: number,
    w: number, h: number, label: string, unit: string, view: TapeView): void {
    ctx.fillStyle = '#1a1f26';
    ctx.fillRect(x, y, w, h);
    ctx.strokeStyle = GRID;
    ctx.strokeRect(x, y, w, h);
    const toY = (fraction: number) => y + h - fraction * h;
    for (const [limit, frac] of [[view.limitLowFraction, view.limitLowFraction],
    [view.limitHighFraction, view.limitHighFraction]] as Array<[number | null, number | null]>) {
        if (limit === null || frac === null) continue;
        ctx.fillStyle = RED;
        ctx.fillRect(x, toY(frac) - 2, w, 4);
    }
    ctx.fillStyle = view.exceeded ? RED : GREEN;
    const py = toY(view.fraction);
    ctx.beginPath();
    ctx.moveTo(x, py);
    ctx.lineTo(x + w, py - 5);
    ctx.lineTo(x + w, py + 5);
    ctx.closePath();
    ctx.fill();
    ctx.fillStyle = INK;
    ctx.font = '12px monospace';
    ctx.fillText(label, x, y - 16);
    ctx.fillText(`${view.value.toFixed(1)}${unit}`, x, y - 4);
}

export function drawArc(ctx: CanvasRenderingContext2D, cx: number, cy: number,
    radius: number, label: string, view: ArcView): void {
    ctx.strokeStyle = GRID;
    ctx.lineWidth = 8;
    ctx.beginPath();
    ctx.arc(cx, cy, radius, Math.PI * 0.75, Math.PI * 2.25);
    ctx.stroke();
    ctx.strokeStyle = view.overLimit ? RED : (view.fraction > 0.85 ? AMBER : GREEN);
    ctx.beginPath();
    ctx.arc(cx, cy, radius, Math.PI * 0.75,
        Math.PI * 0.75 + view.fraction * Math.PI * 1.5);
    ctx.stroke();
    ctx.lineWidth = 1;
    ctx.fillStyle = INK;
    ctx.font = '12px monospace';
    ctx.textAlign = 'center';
    ctx.fillText(label, cx, cy + 4);
    ctx.fillText(`${Math.round(view.fraction * 100)}%`, cx, cy + 18);
    ctx.textAlign = 'left';
}

export function drawStickPad(ctx: CanvasRenderingContext2D, x: number, y: number,
    size: number, stickX: number, stickY: number,
    forcePitch: number, forceRoll: number): void {
    ctx.fillStyle = '#1a1f26';
    ctx.fillRect(x, y, size, size);
    ctx.strokeStyle = GRID;
    ctx.strokeRect(x, y, size, size);
    ctx.beginPath();
    ctx.moveTo(x + size / 2, y);
    ctx.lineTo(x + size / 2, y + size);
    ctx.moveTo(x, y + size / 2);
    ctx.lineTo(x + size, y + size / 2);
    ctx.stroke();
    const px = x + size / 2 + stickX * size / 2;
    const py = y + size / 2 - stickY * size / 2;
    // force vector from the deflection cross-hair
    ctx.strokeStyle = AMBER;
    ctx.lineWidth = 2;
    ctx.beginPath();
    ctx.moveTo(px, py);
    ctx.lineTo(px + forceRoll / 27 * size / 2, py - forcePitch / 27 * size / 2);
    ctx.stroke();
    ctx.lineWidth = 1;
    ctx.strokeStyle = GREEN;
    ctx.beginPath();
    ctx.moveTo(px - 8, py);
    ctx.lineTo(px + 8, py);
    ctx.moveTo(px, py - 8);
    ctx.lineTo(px, py + 8);
    ctx.stroke();
}

export function drawFfc(ctx: CanvasRenderingContext2D, x: number, y: number,
    w: number, h: number, label: string, view: FfcPlotView): void {
    ctx.fillStyle = '#1a1f26';
    ctx.fillRect(x, y, w, h);
    ctx.strokeStyle = GRID;
    ctx.strokeRect(x, y, w, h);
    const toX = (pos: number) => x + (pos + 24) / 48 * w;
    const toY = (force: number) => y + h / 2 - force / 27 * (h / 2 - 4);
    ctx.beginPath();
    ctx.moveTo(toX(0), y);
    ctx.lineTo(toX(0), y + h);
    ctx.moveTo(x, toY(0));
    ctx.lineTo(x + w, toY(0));
    ctx.stroke();
    ctx.strokeStyle = '#58a6ff';
    ctx.lineWidth = 2;
    ctx.beginPath();
    view.points.forEach(([pos, force], i) => {
        if (i === 0) ctx.moveTo(toX(pos), toY(force));
        else ctx.lineTo(toX(pos), toY(force));
    });
    ctx.stroke();
    ctx.lineWidth = 1;
    ctx.fillStyle = AMBER;
    ctx.beginPath();
    ctx.arc(toX(view.operating[0]), toY(view.operating[1]), 4, 0, Math.PI * 2);
    ctx.fill();
    ctx.fillStyle = INK;
    ctx.font = '12px monospace';
    ctx.fillText(label, x + 4, y + 14);
}

export function drawDashboard(ctx: CanvasRenderingContext2D, w: number, h: number,
    vm: DashboardViewModel): void {
    ctx.clearRect(0, 0, w, h);
    ctx.fillStyle = '#11141a';
    ctx.fillRect(0, 0, w, h);
    drawAttitude(ctx, 300, 300, vm.attitude.rollDeg, vm.attitude.pitchDeg);
    drawTape(ctx, 330, 40, 26, 250, 'alpha', ' deg', vm.alphaTape);
    drawTape(ctx, 395, 40, 26, 250, 'nz', ' g', vm.nzTape);
    drawTape(ctx, 460, 40, 26, 250, 'bank', ' deg', vm.phiTape);
    drawArc(ctx, 560, 110, 40, 'alpha', vm.alphaArc);
    drawArc(ctx, 560, 230, 40, 'bank', vm.phiArc);
    drawFfc(ctx, 620, 40, 240, 120, 'FFC pitch', vm.ffcPitch);
    drawFfc(ctx, 620, 180, 240, 120, 'FFC roll', vm.ffcRoll);
    ctx.fillStyle = INK;
    ctx.font = '13px monospace';
    ctx.fillText(`t ${vm.t.toFixed(2)} s   V ${vm.airspeed.toFixed(0)} ft/s   ` +
        `alt ${vm.altitude.toFixed(0)} ft   nz ${vm.nz.toFixed(2)} g   ` +
        `ACS ${vm.acsMode}`, 12, h - 12);
}
