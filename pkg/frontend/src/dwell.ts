// Dwell measurement: visible time accumulated while the tab is focused and
// the specification unchanged; paused on blur, reset on every spec change.

export class DwellTimer {
  private accumulated = 0;
  private runningSince: number | null = null;
  private readonly now: () => number;

  constructor(now: () => number = () => Date.now()) {
    this.now = now;
    this.runningSince = this.now();
  }

  pause(): void {
    if (this.runningSince !== null) {
      this.accumulated += this.now() - this.runningSince;
      this.runningSince = null;
    }
  }

  resume(): void {
    if (this.runningSince === null) {
      this.runningSince = this.now();
    }
  }

  /** Current dwell in milliseconds without disturbing the clock. */
  peek(): number {
    const live = this.runningSince === null ? 0 : this.now() - this.runningSince;
    return Math.round(this.accumulated + live);
  }

  /** Read the dwell and reset to zero (the spec changed). */
  take(): number {
    const value = this.peek();
    this.accumulated = 0;
    if (this.runningSince !== null) {
      this.runningSince = this.now();
    }
    return value;
  }
}
