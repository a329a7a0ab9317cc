// Row colors come from the service's green-to-red triple. The high-contrast
// palette (for color-blind users) remaps that triple's red channel onto a
// dark-blue-to-orange ramp; intensity is taken from the service color, never
// recomputed from scores.

import type { ColorMode } from "./types.js";

const HC_LOW: [number, number, number] = [16, 52, 166]; // dark blue = not suspicious
const HC_HIGH: [number, number, number] = [255, 140, 0]; // orange = most suspicious

// red channel of the standard scale spans 0..220
const STANDARD_RED_MAX = 220;

export function cssColor(serviceColor: [number, number, number], mode: ColorMode): string {
  if (mode === "STANDARD") {
    const [r, g, b] = serviceColor;
    return `rgb(${r},${g},${b})`;
  }
  const t = serviceColor[0] / STANDARD_RED_MAX;
  const mix = (lo: number, hi: number) => Math.round(lo + t * (hi - lo));
  return `rgb(${mix(HC_LOW[0], HC_HIGH[0])},${mix(HC_LOW[1], HC_HIGH[1])},${mix(HC_LOW[2], HC_HIGH[2])})`;
}

export function textColorOn(serviceColor: [number, number, number], mode: ColorMode): string {
  if (mode === "STANDARD") return "#111";
  // dark-blue end needs light text
  return serviceColor[0] / STANDARD_RED_MAX < 0.45 ? "#fff" : "#111";
}
