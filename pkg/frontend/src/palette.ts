/** Sentiment-to-color mapping. The scene document ships its palette; the
 * viewer applies it verbatim: the low end of score_range maps to low_color,
 * the high end to high_color, linear RGB in between. */

import type { Palette, RGB } from "./types";

export function scoreToColor(palette: Palette, score: number): RGB {
  const [lo, hi] = palette.score_range;
  const t = Math.min(1, Math.max(0, (score - lo) / (hi - lo)));
  const mix = (a: number, b: number) => Math.round(a + (b - a) * t);
  return {
    r: mix(palette.low_color[0], palette.high_color[0]),
    g: mix(palette.low_color[1], palette.high_color[1]),
    b: mix(palette.low_color[2], palette.high_color[2]),
  };
}

export function rgbToCss(color: RGB): string {
  return `rgb(${color.r}, ${color.g}, ${color.b})`;
}
