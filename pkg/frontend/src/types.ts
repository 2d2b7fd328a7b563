/** Wire types mirroring the service JSON schema, consumed verbatim. */

export interface TickJson {
  x: number;
  label: string;
}

export interface AxisJson {
  min: number;
  max: number;
  ticks: TickJson[];
}

export interface RectJson {
  x0: number;
  x1: number;
  h: number;
  color: string;
}

export interface CurvePointJson {
  x: number;
  y: number;
}

export interface StripeJson {
  label: string;
  composition: string;
  rects: RectJson[];
  curve?: CurvePointJson[];
}

export interface SceneJson {
  axis: AxisJson;
  stripes: StripeJson[];
}

export interface RowMeta {
  label: string;
  n: number;
}

export interface DatasetMeta {
  id: string;
  property: string;
  rowCount: number;
  globalMin: number;
  globalMax: number;
  rows: RowMeta[];
}

export interface RowDetail {
  label: string;
  histogram: { edges: number[]; counts: number[]; n: number };
  curve: { xs: number[]; ys: number[]; h: number } | null;
  stats: {
    n: number;
    min: number | null;
    max: number | null;
    mean: number | null;
    median: number | null;
  };
}

export type Method = "uniform" | "bb" | "nb";
export type Composition = "colorOnly" | "overlay" | "filledCurve";
export type ColorMode = "linear" | "log1p";
export type Normalization = "global" | "perRow";

/** Everything the explorer needs to reproduce a view. */
export interface ViewState {
  datasetId: string;
  method: Method;
  composition: Composition;
  colorMode: ColorMode;
  normalization: Normalization;
  zoomRange: [number, number] | null;
  selectedRows: number[];
}
