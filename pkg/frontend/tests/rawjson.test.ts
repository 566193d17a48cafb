import { describe, expect, it } from "vitest";

import { parseWithLiterals } from "../src/rawjson";

describe("parseWithLiterals", () => {
  it("parses like JSON.parse", () => {
    const text = '{"a": [1, {"b": 2.5}], "c": "x", "d": true, "e": null}';
    expect(parseWithLiterals(text).value).toEqual(JSON.parse(text));
  });

  it("keeps Python-style float literals that JSON.stringify would change", () => {
    const doc = parseWithLiterals<{ x: number; y: number; z: number }>(
      '{"x": 0.0, "y": 1e-05, "z": 7}',
    );
    expect(doc.value).toEqual({ x: 0, y: 1e-5, z: 7 });
    expect(doc.literal("x")).toBe("0.0");
    expect(doc.literal("y")).toBe("1e-05");
    expect(doc.literal("z")).toBe("7");
    // demonstrate the stringify mismatch the literals avoid
    expect(JSON.stringify(doc.value.x)).toBe("0");
    expect(JSON.stringify(doc.value.y)).toBe("0.00001");
  });

  it("indexes nested paths through arrays", () => {
    const doc = parseWithLiterals(
      '{"rounds": [{"metrics": {"beta": 7.646}}, {"metrics": {"beta": 1.0}}]}',
    );
    expect(doc.literal("rounds[0].metrics.beta")).toBe("7.646");
    expect(doc.literal("rounds[1].metrics.beta")).toBe("1.0");
  });

  it("handles negative numbers and exponents", () => {
    const doc = parseWithLiterals('{"a": -0.014218, "b": 1.2E+3}');
    expect(doc.value).toEqual({ a: -0.014218, b: 1200 });
    expect(doc.literal("a")).toBe("-0.014218");
    expect(doc.literal("b")).toBe("1.2E+3");
  });

  it("handles escaped strings and whitespace", () => {
    const doc = parseWithLiterals('  {"a\\"b": [ 1 ,  2 ] }  ');
    expect(doc.value).toEqual({ 'a"b': [1, 2] });
    expect(doc.literal('a"b[1]')).toBe("2");
  });

  it("rejects trailing garbage", () => {
    expect(() => parseWithLiterals("{}tail")).toThrow(SyntaxError);
  });

  it("round-trips a realistic metrics payload", () => {
    const text =
      '{"rounds": [{"round": 0, "metrics": {"hit": 0.7877492907801419, ' +
      '"fa": 0.015, "d_prime": 2.968, "criterion_c": 0.684, "beta": 7.646, ' +
      '"edge_corrected": false}, "confusion": {"tp": 111, "fn": 30, ' +
      '"fp": 3, "tn": 197}, "calibration": {"x_c": 0.0, "next_x_c": -0.0142, ' +
      '"accept_cut": 0.7, "round": 0}}], "calibration_history": ' +
      '[[0, 0.0, 0.015, 0.7877492907801419, 7.646]], "current_x_c": -0.0142}';
    const doc = parseWithLiterals(text);
    expect(doc.value).toEqual(JSON.parse(text));
    expect(doc.literal("rounds[0].metrics.hit")).toBe("0.7877492907801419");
    expect(doc.literal("rounds[0].calibration.x_c")).toBe("0.0");
    expect(doc.literal("calibration_history[0][1]")).toBe("0.0");
  });
});
