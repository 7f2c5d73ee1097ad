import { describe, expect, it } from "vitest";
import { fitViewport, toScreen } from "../src/render.js";

describe("viewport", () => {
  it("fits bounds centered with preserved aspect", () => {
    const vp = fitViewport([0, 0, 20, 12], 1000, 600, 24);
    // limited by height: (600 - 48) / 12
    expect(vp.scale).toBe(46);
    expect(toScreen(vp, [0, 12])).toEqual([40, 24]);
    expect(toScreen(vp, [20, 0])).toEqual([960, 576]);
    expect(toScreen(vp, [10, 6])).toEqual([500, 300]);
  });

  it("flips y so world up is screen up", () => {
    const vp = fitViewport([0, 0, 10, 10], 400, 400, 0);
    const [, lowY] = toScreen(vp, [5, 1]);
    const [, highY] = toScreen(vp, [5, 9]);
    expect(highY).toBeLessThan(lowY);
  });

  it("handles offset bounds", () => {
    const vp = fitViewport([5, 5, 15, 15], 200, 200, 0);
    expect(toScreen(vp, [5, 5])).toEqual([0, 200]);
    expect(toScreen(vp, [15, 15])).toEqual([200, 0]);
  });
});
