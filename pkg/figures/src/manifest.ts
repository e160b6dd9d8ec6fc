import { createHash } from "crypto";
import { readFileSync } from "fs";
import { join } from "path";

/** Short provenance hash of the run manifest the figures were built from. */
export function manifestHash(inDir: string): string {
  const bytes = readFileSync(join(inDir, "manifest.json"));
  return createHash("sha256").update(bytes).digest("hex").slice(0, 12);
}

export function manifestFooter(inDir: string): string {
  return `manifest:${manifestHash(inDir)}`;
}
