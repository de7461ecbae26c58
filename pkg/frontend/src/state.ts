/** Playground state and its reducer.
 *
 * All UI behavior that has rules attached lives here, pure and
 * synchronous, so it can be tested without a browser:
 *   - a failed compile keeps the last good session on screen,
 *   - results for superseded source versions are dropped,
 *   - only the user (or explicit snippet insertion) changes the editor text.
 */

import type { Diagnostic } from "./api.js";
import { insertAt } from "./palette.js";

export interface PlaygroundState {
  sourceText: string;
  /** Bumped on every edit; async results carry the version they belong to. */
  version: number;
  compiling: boolean;
  diagnostics: Diagnostic[];
  /** Session and view of the newest program that compiled and started. */
  sessionId: string | null;
  svg: string | null;
  sessionVersion: number;
  elapsed: number;
  animationPlaying: boolean;
  /** Set once a tick comes back rejected: the program is not a gameApp. */
  ticksRejected: boolean;
  eventLog: string[];
  banner: string | null;
}

export function initialState(sourceText = ""): PlaygroundState {
  return {
    sourceText,
    version: 0,
    compiling: false,
    diagnostics: [],
    sessionId: null,
    svg: null,
    sessionVersion: -1,
    elapsed: 0,
    animationPlaying: true,
    ticksRejected: false,
    eventLog: [],
    banner: null,
  };
}

export type Action =
  | { kind: "edited"; text: string }
  | { kind: "snippetInserted"; snippet: string; cursor: number }
  | { kind: "compileStarted"; version: number }
  | { kind: "compileFailed"; version: number; diagnostics: Diagnostic[] }
  | {
      kind: "sessionStarted";
      version: number;
      sessionId: string;
      svg: string;
      diagnostics: Diagnostic[]; // warnings from a successful compile
    }
  | { kind: "sessionFailed"; version: number; diagnostics: Diagnostic[] }
  | { kind: "eventApplied"; svg: string; fired: string[]; elapsed: number; error?: string }
  | { kind: "tapMissed" }
  | { kind: "ticksRejected" }
  | { kind: "playingSet"; playing: boolean }
  | { kind: "networkFailed"; message: string }
  | { kind: "bannerCleared" };

const LOG_LIMIT = 200;

function appendLog(log: string[], lines: string[]): string[] {
  const next = [...log, ...lines];
  return next.length > LOG_LIMIT ? next.slice(next.length - LOG_LIMIT) : next;
}

export function reduce(state: PlaygroundState, action: Action): PlaygroundState {
  switch (action.kind) {
    case "edited":
      return { ...state, sourceText: action.text, version: state.version + 1 };

    case "snippetInserted": {
      const { text } = insertAt(state.sourceText, action.cursor, action.snippet);
      return { ...state, sourceText: text, version: state.version + 1 };
    }

    case "compileStarted":
      if (action.version !== state.version) return state;
      return { ...state, compiling: true, banner: null };

    case "compileFailed":
      if (action.version !== state.version) return state; // superseded
      // keep sessionId and svg: editing never blanks the canvas
      return { ...state, compiling: false, diagnostics: action.diagnostics };

    case "sessionStarted":
      if (action.version !== state.version) return state;
      return {
        ...state,
        compiling: false,
        diagnostics: action.diagnostics,
        sessionId: action.sessionId,
        svg: action.svg,
        sessionVersion: action.version,
        elapsed: 0, // animation clock restarts with the new program
        ticksRejected: false,
        banner: null,
      };

    case "sessionFailed":
      if (action.version !== state.version) return state;
      return { ...state, compiling: false, diagnostics: action.diagnostics };

    case "eventApplied": {
      const lines = action.error ? [`error: ${action.error}`] : action.fired;
      return {
        ...state,
        svg: action.svg,
        elapsed: action.elapsed,
        eventLog: appendLog(state.eventLog, lines),
      };
    }

    case "tapMissed":
      return { ...state, eventLog: appendLog(state.eventLog, ["no handler hit"]) };

    case "ticksRejected":
      return { ...state, ticksRejected: true, animationPlaying: false };

    case "playingSet":
      return { ...state, animationPlaying: action.playing };

    case "networkFailed":
      return { ...state, compiling: false, banner: action.message };

    case "bannerCleared":
      return { ...state, banner: null };
  }
}

/** Tiny store: dispatch reduces, listeners hear about replacements. */
export class Store {
  private listeners: Array<(s: PlaygroundState) => void> = [];

  constructor(public state: PlaygroundState) {}

  dispatch(action: Action): PlaygroundState {
    this.state = reduce(this.state, action);
    for (const listener of this.listeners) listener(this.state);
    return this.state;
  }

  subscribe(listener: (s: PlaygroundState) => void): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }
}
