/**
 * Session state machine.
 *
 * Every displayed number comes from a service response: after each
 * mutation the controller refetches /next and /metrics rather than
 * adjusting counts locally.  At most one mutation request is in flight;
 * the round trigger and genre buttons are disabled while one is.
 */

import { ApiClient } from './api.js';
import type {
  MetricsResponse,
  NextResponse,
  QueryRecord,
  SessionOptions,
} from './types.js';

export interface SessionView {
  sessionId: string | null;
  query: QueryRecord | null;
  remainingInBatch: number;
  poolRemaining: number;
  poolEmpty: boolean;
  metrics: MetricsResponse | null;
  busy: boolean;
  error: string | null;
  lastRoundAutoLabeled: number | null;
}

export type RenderFn = (view: SessionView) => void;

export class SessionController {
  private view: SessionView = {
    sessionId: null,
    query: null,
    remainingInBatch: 0,
    poolRemaining: 0,
    poolEmpty: false,
    metrics: null,
    busy: false,
    error: null,
    lastRoundAutoLabeled: null,
  };

  private submittedRecordIds = new Set<number>();

  constructor(
    private readonly api: ApiClient,
    private readonly render: RenderFn,
  ) {}

  snapshot(): SessionView {
    return { ...this.view };
  }

  private paint(changes: Partial<SessionView>): void {
    this.view = { ...this.view, ...changes };
    this.render(this.snapshot());
  }

  async start(options: SessionOptions): Promise<void> {
    this.paint({ busy: true, error: null });
    try {
      const sessionId = await this.api.createSession(options);
      this.submittedRecordIds.clear();
      this.paint({ sessionId, lastRoundAutoLabeled: null });
      await this.refresh();
    } catch (error) {
      this.paint({ error: describe(error) });
    } finally {
      this.paint({ busy: false });
    }
  }

  /** Refetch the queue head and the progress counters. */
  async refresh(): Promise<void> {
    const sessionId = this.view.sessionId;
    if (sessionId === null) return;
    try {
      const [next, metrics] = [
        await this.api.next(sessionId),
        await this.api.metrics(sessionId),
      ];
      this.applyNext(next);
      this.paint({ metrics, error: null });
    } catch (error) {
      this.paint({ error: describe(error) });
    }
  }

  private applyNext(next: NextResponse): void {
    this.paint({
      query: next.record,
      remainingInBatch: next.remaining_in_batch,
      poolRemaining: next.pool_remaining,
      poolEmpty: next.pool_empty,
    });
  }

  async submitLabel(genreId: number): Promise<void> {
    const { sessionId, query, busy } = this.view;
    if (sessionId === null || query === null || busy) return;
    if (this.submittedRecordIds.has(query.record_id)) return;
    this.submittedRecordIds.add(query.record_id);
    this.paint({ busy: true, error: null });
    try {
      const outcome = await this.api.label(
        sessionId,
        query.record_id,
        genreId,
      );
      if (!outcome.accepted) {
        this.paint({
          error: outcome.detail ?? 'label rejected; first write wins',
        });
      }
      if (outcome.remaining_in_batch === 0) {
        await this.runRound();
      } else {
        await this.refresh();
      }
    } catch (error) {
      // rejected submission: restore the view, allow a retry
      this.submittedRecordIds.delete(query.record_id);
      this.paint({ error: describe(error) });
      await this.refresh();
    } finally {
      this.paint({ busy: false });
    }
  }

  async triggerRound(): Promise<void> {
    if (this.view.busy || this.view.sessionId === null) return;
    this.paint({ busy: true, error: null });
    try {
      await this.runRound();
    } catch (error) {
      this.paint({ error: describe(error) });
    } finally {
      this.paint({ busy: false });
    }
  }

  private async runRound(): Promise<void> {
    const sessionId = this.view.sessionId;
    if (sessionId === null) return;
    const summary = await this.api.round(sessionId);
    this.submittedRecordIds.clear();
    this.paint({ lastRoundAutoLabeled: summary.auto_labeled });
    await this.refresh();
  }
}

function describe(error: unknown): string {
  return error instanceof Error ? error.message : String(error);
}
