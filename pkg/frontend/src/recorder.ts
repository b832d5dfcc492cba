// Session recorder: one log event per specification visited, in the
// service's line-delimited format. Events buffer locally and flush on spec
// changes and page unload.

import type { LogEventDocument, SpecDocument, VisualDocument } from "./types.js";

export interface RecorderOptions {
  sessionId: string;
  taskType: string;
  role?: "expert" | "regular";
  now?: () => number;
  post?: (body: string) => Promise<unknown>;
}

export class SessionRecorder {
  private readonly sessionId: string;
  private readonly taskType: string;
  private readonly role: "expert" | "regular";
  private readonly now: () => number;
  private readonly post?: (body: string) => Promise<unknown>;
  private buffer: LogEventDocument[] = [];
  private history: LogEventDocument[] = [];

  constructor(options: RecorderOptions) {
    this.sessionId = options.sessionId;
    this.taskType = options.taskType;
    this.role = options.role ?? "regular";
    this.now = options.now ?? (() => Date.now());
    this.post = options.post;
  }

  /** Record a specification the user just left, with its accumulated dwell. */
  record(spec: SpecDocument, visual: VisualDocument, dwellMs: number): LogEventDocument {
    const event: LogEventDocument = {
      sessionId: this.sessionId,
      role: this.role,
      taskType: this.taskType,
      timestampMs: this.now(),
      dwellMs: Math.max(0, Math.round(dwellMs)),
      spec,
      visual,
    };
    this.buffer.push(event);
    this.history.push(event);
    return event;
  }

  pendingLines(): string[] {
    return this.buffer.map((event) => JSON.stringify(event));
  }

  /** Every event recorded this session, flushed or not. */
  allEvents(): LogEventDocument[] {
    return [...this.history];
  }

  allLines(): string[] {
    return this.history.map((event) => JSON.stringify(event));
  }

  get recordedCount(): number {
    return this.history.length;
  }

  /** Send buffered events to the collector; keeps them on failure. */
  async flush(): Promise<number> {
    if (!this.post || this.buffer.length === 0) return 0;
    const lines = this.pendingLines();
    await this.post(lines.join("\n") + "\n");
    const pushed = this.buffer.length;
    this.buffer = [];
    return pushed;
  }
}
