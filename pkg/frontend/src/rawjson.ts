/** JSON reader that records each number's exact source literal.
 *
 * The service serializes floats with Python's shortest-round-trip repr
 * ("0.0", "1e-05"), which JSON.stringify would re-render differently
 * ("0", "0.00001"). Displaying payload numbers byte-for-byte therefore
 * needs the original token, keyed by its JSON path.
 */

export interface RawDocument<T> {
  value: T;
  /** path like "rounds[0].metrics.beta" -> exact source literal */
  literal: (path: string) => string | undefined;
}

export function parseWithLiterals<T>(text: string): RawDocument<T> {
  const literals = new Map<string, string>();
  const parser = new Parser(text, literals);
  const value = parser.parseValue("") as T;
  parser.skipWs();
  if (!parser.atEnd()) throw new SyntaxError("trailing characters in JSON");
  return { value, literal: (path) => literals.get(path) };
}

class Parser {
  private pos = 0;

  constructor(
    private readonly text: string,
    private readonly literals: Map<string, string>,
  ) {}

  atEnd(): boolean {
    return this.pos >= this.text.length;
  }

  skipWs(): void {
    while (!this.atEnd() && " \t\n\r".includes(this.text[this.pos]!)) this.pos++;
  }

  parseValue(path: string): unknown {
    this.skipWs();
    const ch = this.text[this.pos];
    if (ch === "{") return this.parseObject(path);
    if (ch === "[") return this.parseArray(path);
    if (ch === '"') return this.parseString();
    if (ch === "t" || ch === "f" || ch === "n") return this.parseKeyword();
    return this.parseNumber(path);
  }

  private parseObject(path: string): Record<string, unknown> {
    const out: Record<string, unknown> = {};
    this.expect("{");
    this.skipWs();
    if (this.text[this.pos] === "}") {
      this.pos++;
      return out;
    }
    for (;;) {
      this.skipWs();
      const key = this.parseString();
      this.skipWs();
      this.expect(":");
      out[key] = this.parseValue(path ? `${path}.${key}` : key);
      this.skipWs();
      if (this.text[this.pos] === ",") {
        this.pos++;
        continue;
      }
      this.expect("}");
      return out;
    }
  }

  private parseArray(path: string): unknown[] {
    const out: unknown[] = [];
    this.expect("[");
    this.skipWs();
    if (this.text[this.pos] === "]") {
      this.pos++;
      return out;
    }
    for (;;) {
      out.push(this.parseValue(`${path}[${out.length}]`));
      this.skipWs();
      if (this.text[this.pos] === ",") {
        this.pos++;
        continue;
      }
      this.expect("]");
      return out;
    }
  }

  private parseString(): string {
    const start = this.pos;
    this.expect('"');
    while (this.text[this.pos] !== '"') {
      if (this.atEnd()) throw new SyntaxError("unterminated string");
      if (this.text[this.pos] === "\\") this.pos++;
      this.pos++;
    }
    this.pos++;
    return JSON.parse(this.text.slice(start, this.pos)) as string;
  }

  private parseKeyword(): boolean | null {
    for (const [word, value] of [
      ["true", true],
      ["false", false],
      ["null", null],
    ] as const) {
      if (this.text.startsWith(word, this.pos)) {
        this.pos += word.length;
        return value;
      }
    }
    throw new SyntaxError(`unexpected token at ${this.pos}`);
  }

  private parseNumber(path: string): number {
    const match = /^-?\d+(?:\.\d+)?(?:[eE][+-]?\d+)?/.exec(
      this.text.slice(this.pos),
    );
    if (!match) throw new SyntaxError(`invalid number at ${this.pos}`);
    this.pos += match[0].length;
    this.literals.set(path, match[0]);
    return Number(match[0]);
  }

  private expect(ch: string): void {
    if (this.text[this.pos] !== ch) {
      throw new SyntaxError(
        `expected ${ch} at ${this.pos}, found ${this.text[this.pos] ?? "EOF"}`,
      );
    }
    this.pos++;
  }
}
