/** Trailing-edge debounce with injectable timers so tests can drive time. */

export interface Timers {
  set(fn: () => void, ms: number): number;
  clear(id: number): void;
}

const realTimers: Timers = {
  set: (fn, ms) => setTimeout(fn, ms) as unknown as number,
  clear: (id) => clearTimeout(id),
};

export interface Debounced<A extends unknown[]> {
  call(...args: A): void;
  /** Drop the pending invocation, if any. */
  cancel(): void;
  /** Run the pending invocation immediately, if any. */
  flush(): void;
  pending(): boolean;
}

export function debounce<A extends unknown[]>(
  fn: (...args: A) => void,
  ms: number,
  timers: Timers = realTimers,
): Debounced<A> {
  let id: number | null = null;
  let lastArgs: A | null = null;

  const fire = () => {
    id = null;
    const args = lastArgs!;
    lastArgs = null;
    fn(...args);
  };

  return {
    call(...args: A) {
      lastArgs = args;
      if (id !== null) timers.clear(id);
      id = timers.set(fire, ms);
    },
    cancel() {
      if (id !== null) timers.clear(id);
      id = null;
      lastArgs = null;
    },
    flush() {
      if (id === null) return;
      timers.clear(id);
      fire();
    },
    pending() {
      return id !== null;
    },
  };
}

/** Debounce window for recompiling after the last keystroke. */
export const COMPILE_DEBOUNCE_MS = 350;
