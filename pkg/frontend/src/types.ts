// Wire documents exchanged with the recommendation service.
// Shapes mirror docs/formats.md in the repository root.

export type Comparator = "<" | "<=" | "=" | "!=" | ">=" | ">" | "in" | "between";

export type Operand = number | string | boolean;

export interface FilterDocument {
  field: string;
  comparator?: Comparator;
  operands?: Operand[];
  aggregated?: boolean;
}

export interface SpecDocument {
  x: string | null;
  y: string | null;
  layers: string[];
  filters: FilterDocument[];
  grouping: string[];
}

export interface EncodingDocument {
  field: string;
  cue: string;
}

export interface VisualDocument {
  chartType: string;
  encodings: EncodingDocument[];
  extra: Record<string, string>;
}

export interface ColumnDocument {
  label: string;
  type: "int" | "float" | "string" | "datetime" | "bool";
}

export interface ResultTableDocument {
  columns: ColumnDocument[];
  rows: (number | string | boolean | null)[][];
}

export interface SchemaColumnDocument {
  name: string;
  type: ColumnDocument["type"];
  role: "measure" | "dimension" | "latitude" | "longitude" | "none";
}

export interface SchemaDocument {
  name: string;
  columns: SchemaColumnDocument[];
}

export interface NavOpDocument {
  kind:
    | "AddFilter"
    | "RemoveFilter"
    | "AddSelectField"
    | "RemoveSelectField"
    | "AddGroupField"
    | "RemoveGroupField"
    | "AddComplexOp"
    | "RemoveComplexOp";
  field: string;
  slot?: "X" | "Y" | "Layer" | "Filter" | "Grouping";
  after?: string;
  predicate?: FilterDocument;
}

export interface RankedNodeDocument {
  nodeId: string;
  displayIndex: number;
  pathDistance: number | null;
  effectiveInterestingnessMs: number;
  viaFill: boolean;
}

export interface RecommendationDocument {
  node: RankedNodeDocument;
  spec: SpecDocument;
  visual: VisualDocument;
  sqlTemplate: string;
  placeholderFilters: string[];
  alreadyVisited: boolean;
}

export interface RecommendResponse {
  mode: "prediction" | "recommendation";
  recommendations: RecommendationDocument[];
}

export interface MatchResponse {
  minDistance: number;
  nodes: { nodeId: string; distance: number }[];
}

export interface AbstractSpecDocument {
  x: string | null;
  y: string | null;
  layers: string[];
  filterDescriptors: string[];
  grouping: string[];
}

export interface GraphNodeDocument {
  nodeId: string;
  displayIndex: number;
  spec: AbstractSpecDocument;
  interestingnessMs: number;
  votes: number;
  visualSpecs: VisualDocument[];
}

export interface GraphEdgeDocument {
  from: string;
  to: string;
  expertCount: number;
  userCount: number;
  navOp?: NavOpDocument;
}

export interface GraphDocument {
  version: number;
  taskType: string;
  meta: {
    datasetName: string | null;
    defaultThresholdMs: number;
    sessions: { sessionId: string; role: "expert" | "regular"; events: number }[];
  };
  nodes: GraphNodeDocument[];
  edges: GraphEdgeDocument[];
}

export interface LogEventDocument {
  sessionId: string;
  role: "expert" | "regular";
  taskType: string;
  timestampMs: number;
  dwellMs: number;
  spec: SpecDocument;
  visual: VisualDocument;
}

export interface IngestStats {
  taskType: string;
  sequences: number;
  nodes: number;
  newNodes: number;
  edges: number;
}
