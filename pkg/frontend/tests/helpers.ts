import { readFileSync, readdirSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import { Bundle, parseBundle } from "../src/bundle.js";

const FIXTURES = join(dirname(fileURLToPath(import.meta.url)),
                      "..", "..", "fixtures");

export function fixtureNames(): string[] {
  return readdirSync(FIXTURES)
    .filter((f) => f.endsWith(".bundle.json"))
    .map((f) => f.replace(".bundle.json", ""))
    .sort();
}

export function fixtureText(name: string): string {
  return readFileSync(join(FIXTURES, `${name}.bundle.json`), "utf8");
}

export function loadFixture(name: string): Bundle {
  return parseBundle(fixtureText(name));
}

export function loadExpected(name: string): Record<string, unknown> {
  return JSON.parse(
    readFileSync(join(FIXTURES, `${name}.expected.json`), "utf8"));
}
