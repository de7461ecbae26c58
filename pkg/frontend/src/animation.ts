/** Frame-driven tick source for gameApp sessions.
 *
 * Wraps requestAnimationFrame behind an injectable interface so tests can
 * pump frames by hand. Delivers measured dt in seconds; the first frame
 * after start only establishes the baseline. A hidden tab simply yields
 * one large dt when frames resume, which keeps elapsed time truthful.
 */

export interface FrameSource {
  request(callback: (timestampMs: number) => void): number;
  cancel(id: number): void;
}

export function browserFrames(): FrameSource {
  return {
    request: (cb) => requestAnimationFrame(cb),
    cancel: (id) => cancelAnimationFrame(id),
  };
}

export class AnimationDriver {
  private handle: number | null = null;
  private lastMs: number | null = null;

  constructor(
    private readonly onTick: (dtSeconds: number) => void,
    private readonly frames: FrameSource,
  ) {}

  get running(): boolean {
    return this.handle !== null;
  }

  start(): void {
    if (this.handle !== null) return;
    this.lastMs = null;
    this.schedule();
  }

  stop(): void {
    if (this.handle !== null) this.frames.cancel(this.handle);
    this.handle = null;
    this.lastMs = null;
  }

  private schedule(): void {
    this.handle = this.frames.request((ms) => this.frame(ms));
  }

  private frame(ms: number): void {
    if (this.handle === null) return; // stopped between schedule and fire
    if (this.lastMs !== null) {
      const dt = (ms - this.lastMs) / 1000;
      if (dt > 0) this.onTick(dt);
    }
    this.lastMs = ms;
    this.schedule();
  }
}

export interface TickEvent {
  dt: number;
}

/** Events needed to land a fresh session exactly on `target` seconds.
 *
 * Takes the ticks this session has already been fed, keeps the prefix
 * that fits inside the target, and tops up with one fractional tick.
 * Replay determinism makes the scrubbed view exact, not approximate.
 */
export function scrubPlan(history: TickEvent[], target: number): TickEvent[] {
  if (target <= 0) return [];
  const plan: TickEvent[] = [];
  let used = 0;
  for (const tick of history) {
    if (used + tick.dt > target) break;
    plan.push({ dt: tick.dt });
    used += tick.dt;
  }
  if (target - used > 0) plan.push({ dt: target - used });
  return plan;
}
