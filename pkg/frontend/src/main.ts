/** Page wiring: socket, render loop, stick pad, and the control buttons. */

import { CockpitClient, SOCKET_OPEN } from './client.js';
import { drawDashboard, drawStickPad } from './render.js';
import { StickInput } from './stick.js';
import { buildViewModel } from './viewmodel.js';

function $(id: string): HTMLElement {
    const el = document.getElementById(id);
    if (el === null) throw new Error(`missing element #${id}`);
    return el;
}

const canvas = $('dashboard') as HTMLCanvasElement;
const stickCanvas = $('stickpad') as HTMLCanvasElement;
const staleOverlay = $('stale');
const statusLine = $('status');
const wsInput = $('wsurl') as HTMLInputElement;

const client = new CockpitClient();
let socket: WebSocket | null = null;

function connect(): void {
    if (socket !== null) {
        client.close();
        socket = null;
    }
    const ws = new WebSocket(wsInput.value);
    socket = ws;
    ws.onopen = () => {
        client.attach({
            send: (d) => ws.send(d),
            close: () => ws.close(),
            get readyState() { return ws.readyState === WebSocket.OPEN ? SOCKET_OPEN : 0; },
        });
        statusLine.textContent = `connected to ${wsInput.value}`;
    };
    ws.onmessage = (event) => client.onMessage(String(event.data));
    ws.onclose = () => {
        statusLine.textContent = 'disconnected';
    };
    ws.onerror = () => {
        statusLine.textContent = 'socket error';
    };
}

const stick = new StickInput(
    (force) => client.setGrip(force),
    () => {
        const rect = stickCanvas.getBoundingClientRect();
        return { left: rect.left, top: rect.top, width: rect.width, height: rect.height };
    });

stickCanvas.addEventListener('pointerdown', (e) => {
    if (!client.inputsEnabled()) return;
    stickCanvas.setPointerCapture(e.pointerId);
    stick.pointerDown(e.clientX, e.clientY);
});
stickCanvas.addEventListener('pointermove', (e) => stick.pointerMove(e.clientX, e.clientY));
stickCanvas.addEventListener('pointerup', () => stick.pointerUp());
stickCanvas.addEventListener('pointercancel', () => stick.pointerUp());

($('pedal') as HTMLInputElement).addEventListener('input', (e) => {
    client.setPedal(parseFloat((e.target as HTMLInputElement).value));
});
($('throttle') as HTMLInputElement).addEventListener('input', (e) => {
    client.setThrottle(parseFloat((e.target as HTMLInputElement).value));
});
$('prot-on').addEventListener('click', () => client.sendEvent({ protection: true }));
$('prot-off').addEventListener('click', () => client.sendEvent({ protection: false }));
$('reset').addEventListener('click', () => client.sendEvent({ reset: true }));
($('acsmode') as HTMLSelectElement).addEventListener('change', (e) => {
    const mode = (e.target as HTMLSelectElement).value as 'disabled' | 'enabled' | 'jammed';
    client.sendEvent({ acs_mode: mode });
});
$('connect').addEventListener('click', connect);

window.addEventListener('beforeunload', () => client.close());

setInterval(() => client.tick(), client.sendIntervalMs);

function renderLoop(): void {
    const ctx = canvas.getContext('2d');
    const stickCtx = stickCanvas.getContext('2d');
    if (ctx !== null && client.latest !== null) {
        const vm = buildViewModel(client.latest);
        drawDashboard(ctx, canvas.width, canvas.height, vm);
        if (stickCtx !== null) {
            drawStickPad(stickCtx, 0, 0, stickCanvas.width, vm.stick.x, vm.stick.y,
                stick.force.pitch, stick.force.roll);
        }
    }
    const stale = client.isStale();
    staleOverlay.style.display = stale ? 'flex' : 'none';
    if (!stale && client.latencyMs !== null) {
        $('latency').textContent = `${Math.max(0, client.latencyMs).toFixed(0)} ms`;
    }
    requestAnimationFrame(renderLoop);
}

wsInput.value = `ws://${location.hostname || '127.0.0.1'}:8765`;
connect();
requestAnimationFrame(renderLoop);
