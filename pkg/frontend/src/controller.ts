/** Orchestration between the store and the HTTP service.
 *
 * Owns the async rules the reducer cannot express alone: the debounced
 * compile loop, at most one in-flight compile, click forwarding with one
 * silent retry after a stale-session 404, and the tick/scrub plumbing.
 */

import { Api, ApiError } from "./api.js";
import type { SessionEvent } from "./api.js";
import { debounce, COMPILE_DEBOUNCE_MS, type Debounced, type Timers } from "./debounce.js";
import { pixelToCollage, parseSvgSize, type ScreenRect } from "./coords.js";
import { Store } from "./state.js";
import type { TickEvent } from "./animation.js";

export class Controller {
  readonly recompileSoon: Debounced<[]>;
  private tickHistory: TickEvent[] = [];
  private compileChain: Promise<void> = Promise.resolve();

  constructor(
    readonly store: Store,
    private readonly api: Api,
    timers?: Timers,
  ) {
    this.recompileSoon = debounce(() => void this.compileNow(), COMPILE_DEBOUNCE_MS, timers);
  }

  onEdit(text: string): void {
    this.store.dispatch({ kind: "edited", text });
    this.recompileSoon.call();
  }

  insertSnippet(snippet: string, cursor: number): void {
    this.store.dispatch({ kind: "snippetInserted", snippet, cursor });
    this.recompileSoon.call();
  }

  /** Compile the current text and swap sessions. Serialized: a second call
   * queues behind the first, so responses never interleave. */
  compileNow(): Promise<void> {
    this.compileChain = this.compileChain.then(() => this.compileOnce());
    return this.compileChain;
  }

  private async compileOnce(): Promise<void> {
    const state = this.store.state;
    const version = state.version;
    const oldSession = state.sessionId;
    this.store.dispatch({ kind: "compileStarted", version });
    try {
      const compiled = await this.api.compile(this.store.state.sourceText);
      if (this.store.state.version !== version) return; // superseded while waiting
      if (!compiled.ok || !compiled.programId) {
        this.store.dispatch({ kind: "compileFailed", version, diagnostics: compiled.diagnostics });
        return;
      }
      const session = await this.api.createSession(compiled.programId);
      if (this.store.state.version !== version) {
        await this.api.deleteSession(session.sessionId);
        return;
      }
      this.tickHistory = [];
      this.store.dispatch({
        kind: "sessionStarted",
        version,
        sessionId: session.sessionId,
        svg: session.svg,
        diagnostics: compiled.diagnostics,
      });
      if (oldSession) await this.api.deleteSession(oldSession);
    } catch (err) {
      if (err instanceof ApiError && err.status === 422) {
        // the program compiled but its model failed to evaluate
        this.store.dispatch({
          kind: "sessionFailed",
          version,
          diagnostics: [
            { severity: "error", line: 1, column: 1, message: err.message },
          ],
        });
        return;
      }
      this.store.dispatch({ kind: "networkFailed", message: String((err as Error).message) });
    }
  }

  /** Forward a pixel click as a tap in collage coordinates. */
  async clickAt(px: number, py: number, rect: ScreenRect): Promise<void> {
    const svg = this.store.state.svg;
    if (!svg || !this.store.state.sessionId) return;
    const size = parseSvgSize(svg);
    if (!size) return;
    const point = pixelToCollage(px, py, rect, size.width, size.height);
    await this.sendEvent({ type: "tap", x: point.x, y: point.y }, true);
  }

  async tick(dt: number): Promise<void> {
    if (this.store.state.ticksRejected) return;
    this.tickHistory.push({ dt });
    await this.sendEvent({ type: "tick", dt }, false);
  }

  async key(kind: "keydown" | "keyup", key: string): Promise<void> {
    await this.sendEvent({ type: kind, key }, false);
  }

  /** Fresh session replayed to the chosen time. */
  async scrubTo(target: number, plan: TickEvent[]): Promise<void> {
    const state = this.store.state;
    if (!state.sessionId || state.sessionVersion !== state.version) return;
    try {
      const session = await this.api.getSession(state.sessionId);
      const fresh = await this.api.createSession(session.programId);
      let last = { svg: fresh.svg, elapsed: 0 };
      for (const tick of plan) {
        const result = await this.api.sendEvent(fresh.sessionId, { type: "tick", dt: tick.dt });
        if (result.error) break;
        last = { svg: result.svg, elapsed: result.elapsed };
      }
      await this.api.deleteSession(state.sessionId);
      this.tickHistory = plan.slice();
      this.store.dispatch({
        kind: "sessionStarted",
        version: state.version,
        sessionId: fresh.sessionId,
        svg: last.svg,
        diagnostics: this.store.state.diagnostics,
      });
      this.store.dispatch({
        kind: "eventApplied",
        svg: last.svg,
        fired: [],
        elapsed: last.elapsed,
      });
      void target;
    } catch (err) {
      this.store.dispatch({ kind: "networkFailed", message: String((err as Error).message) });
    }
  }

  get ticks(): readonly TickEvent[] {
    return this.tickHistory;
  }

  private async sendEvent(event: SessionEvent, retryStale: boolean): Promise<void> {
    const sessionId = this.store.state.sessionId;
    if (!sessionId) return;
    try {
      const result = await this.api.sendEvent(sessionId, event);
      if (result.error && event.type === "tick") {
        this.store.dispatch({ kind: "ticksRejected" });
        return;
      }
      if (event.type === "tap" && result.firedMessages.length === 0 && !result.error) {
        this.store.dispatch({ kind: "tapMissed" });
      }
      this.store.dispatch({
        kind: "eventApplied",
        svg: result.svg,
        fired: result.firedMessages,
        elapsed: result.elapsed,
        ...(result.error ? { error: result.error } : {}),
      });
    } catch (err) {
      if (err instanceof ApiError && err.status === 404 && retryStale) {
        // session evicted under us: recompile once and retry the same event
        await this.compileNow();
        await this.sendEvent(event, false);
        return;
      }
      this.store.dispatch({ kind: "networkFailed", message: String((err as Error).message) });
    }
  }
}
