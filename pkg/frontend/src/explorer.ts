// The exploration loop: one current specification, its slice and chart,
// recommendation cards, and the session recorder feeding graph construction.

import { ApiClient } from "./api.js";
import { buildRenderModel, chooseChartType, type RenderModel } from "./charts.js";
import { DwellTimer } from "./dwell.js";
import { applyAction, type EditorAction } from "./editor.js";
import { SessionRecorder } from "./recorder.js";
import { cloneSpec, emptySpec, isPlaceholder, sameSlice } from "./spec.js";
import type {
  FilterDocument,
  NavOpDocument,
  RecommendationDocument,
  ResultTableDocument,
  SchemaDocument,
  SpecDocument,
  VisualDocument,
} from "./types.js";

export interface ExplorerOptions {
  api: ApiClient;
  taskType: string;
  datasetName: string;
  schema?: SchemaDocument | null;
  sessionId?: string;
  now?: () => number;
}

export interface PlaceholderFill {
  [field: string]: { comparator: FilterDocument["comparator"]; operands: FilterDocument["operands"] };
}

const PLAIN_VISUAL = (chartType: string): VisualDocument => ({
  chartType,
  encodings: [],
  extra: {},
});

export class Explorer {
  readonly api: ApiClient;
  readonly taskType: string;
  readonly datasetName: string;
  readonly schema: SchemaDocument | null;
  readonly recorder: SessionRecorder;
  readonly dwell: DwellTimer;

  currentSpec: SpecDocument = emptySpec();
  lastResult: ResultTableDocument | null = null;
  lastModel: RenderModel | null = null;
  recommendations: RecommendationDocument[] = [];
  userPref: VisualDocument | null = null;
  visitedNodeIds: string[] = [];

  constructor(options: ExplorerOptions) {
    this.api = options.api;
    this.taskType = options.taskType;
    this.datasetName = options.datasetName;
    this.schema = options.schema ?? null;
    this.dwell = new DwellTimer(options.now);
    this.recorder = new SessionRecorder({
      sessionId: options.sessionId ?? `ui-${Date.now().toString(36)}`,
      taskType: options.taskType,
      now: options.now,
      post: (body) => this.api.recordEvents(body),
    });
  }

  currentChartType(): string {
    return chooseChartType(this.currentSpec, this.userPref, [], this.schema).chartType;
  }

  /** Replace the current spec, logging the one just left with its dwell. */
  private async transitionTo(spec: SpecDocument): Promise<void> {
    this.recorder.record(
      this.currentSpec,
      PLAIN_VISUAL(this.currentChartType()),
      this.dwell.take(),
    );
    this.currentSpec = spec;
    this.lastResult = null;
    this.lastModel = null;
    try {
      await this.recorder.flush();
    } catch {
      // Collector unavailable; events stay buffered for the next flush.
    }
  }

  /** Apply one editor action; exactly one navigation op per call. */
  async editSpec(action: EditorAction): Promise<NavOpDocument> {
    const { spec, op } = applyAction(this.currentSpec, action);
    await this.transitionTo(spec);
    return op;
  }

  /** Evaluate the current spec and build its render model. */
  async fetchSlice(): Promise<RenderModel> {
    this.lastResult = await this.api.evaluate(this.datasetName, this.currentSpec);
    this.lastModel = buildRenderModel(this.lastResult, this.currentChartType());
    return this.lastModel;
  }

  async requestRecommendations(m: number, thresholdMs?: number): Promise<RecommendationDocument[]> {
    const response = await this.api.recommend(this.taskType, this.currentSpec, {
      m,
      thresholdMs,
      dataset: this.datasetName,
      userPref: this.userPref ?? undefined,
      visited: this.visitedNodeIds,
    });
    this.recommendations = response.recommendations;
    return this.recommendations;
  }

  /** Placeholder filters on a card that need bounds before applying. */
  static openPlaceholders(card: RecommendationDocument): string[] {
    return card.placeholderFilters;
  }

  /** Adopt a recommendation; placeholder filters may be parameterized. */
  async applyRecommendation(
    card: RecommendationDocument,
    fill: PlaceholderFill = {},
  ): Promise<SpecDocument> {
    const spec = cloneSpec(card.spec);
    spec.filters = spec.filters.map((filter) => {
      const bounds = isPlaceholder(filter) ? fill[filter.field] : undefined;
      return bounds
        ? { field: filter.field, comparator: bounds.comparator, operands: bounds.operands }
        : filter;
    });
    this.userPref = card.visual;
    this.visitedNodeIds.push(card.node.nodeId);
    await this.transitionTo(spec);
    return this.currentSpec;
  }

  upvote(card: RecommendationDocument): Promise<{ nodeId: string; votes: number }> {
    return this.api.upvote(this.taskType, card.node.nodeId);
  }

  /** True when a card's slice is the one currently on screen. */
  isCurrent(card: RecommendationDocument): boolean {
    return sameSlice(card.spec, this.currentSpec);
  }

  /** Flush any buffered events (page unload, periodic). */
  async shutdown(): Promise<void> {
    this.recorder.record(
      this.currentSpec,
      PLAIN_VISUAL(this.currentChartType()),
      this.dwell.take(),
    );
    await this.recorder.flush();
  }
}
