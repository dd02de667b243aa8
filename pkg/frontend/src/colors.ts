/**
 * Stable label colors: a pure function of the label text, so the editor and
 * the variant explorer always agree, across sessions and machines.
 */

function fnv1a(text: string): number {
  let hash = 0x811c9dc5;
  for (let i = 0; i < text.length; i++) {
    hash ^= text.charCodeAt(i);
    hash = Math.imul(hash, 0x01000193) >>> 0;
  }
  return hash >>> 0;
}

export function labelHue(label: string): number {
  return fnv1a(label) % 360;
}

export function labelColor(label: string): string {
  return `hsl(${labelHue(label)}, 65%, 38%)`;
}

export function labelBackground(label: string): string {
  return `hsl(${labelHue(label)}, 70%, 88%)`;
}
