/** Parsing and shaping of the service's serialized flat proof trees.
 *
 * Nodes arrive as tab-separated lines `index TAB rule TAB offsets TAB sequent`
 * in postorder, root last. Offsets are backward child distances: `-` for a
 * leaf, `d` for one child at `i - d`, `(d0,d1)` for children `i - d1` (left)
 * and `i - d0` (right).
 */

export interface TreeNode {
  index: number;
  rule: string;
  offsets: number[];
  sequent: string;
}

export const RULE_LABELS: Record<string, string> = {
  "1": "fact",
  "2": "backchain",
  "3": "instantiate",
  "4": "select",
  "5": "and",
  "6": "implies",
  "7": "forall",
  "8": "exists",
  b: "builtin",
};

export function parseTreeLine(line: string): TreeNode {
  const parts = line.split("\t");
  if (parts.length !== 4) {
    throw new Error(`malformed tree line: ${line}`);
  }
  const [indexText, rule, offsetsText, sequent] = parts as [
    string,
    string,
    string,
    string,
  ];
  const index = Number(indexText);
  if (!Number.isInteger(index) || index < 1) {
    throw new Error(`malformed tree index: ${line}`);
  }
  let offsets: number[];
  if (offsetsText === "-") {
    offsets = [];
  } else if (offsetsText.startsWith("(")) {
    offsets = offsetsText
      .replace(/[()]/g, "")
      .split(",")
      .map((t) => Number(t));
  } else {
    offsets = [Number(offsetsText)];
  }
  if (offsets.some((d) => !Number.isInteger(d) || d < 1)) {
    throw new Error(`malformed tree offsets: ${line}`);
  }
  return { index, rule, offsets, sequent };
}

export function parseTree(lines: string[]): TreeNode[] {
  const nodes = lines.map(parseTreeLine);
  nodes.forEach((node, at) => {
    if (node.index !== at + 1) {
      throw new Error(`tree lines out of order at ${node.index}`);
    }
  });
  return nodes;
}

/** Children of node `i`, left first (same convention as the service). */
export function childIndexes(node: TreeNode): number[] {
  const [d0, d1] = node.offsets;
  if (d0 === undefined) return [];
  if (d1 === undefined) return [node.index - d0];
  return [node.index - d1, node.index - d0];
}

/** Depth of every node below the root (root depth 0), from offsets alone. */
export function nodeDepths(nodes: TreeNode[]): number[] {
  const depths = new Array<number>(nodes.length).fill(0);
  const walk = (index: number, depth: number): void => {
    depths[index - 1] = depth;
    const node = nodes[index - 1];
    if (!node) throw new Error(`dangling child index ${index}`);
    for (const child of childIndexes(node)) walk(child, depth + 1);
  };
  if (nodes.length > 0) walk(nodes.length, 0);
  return depths;
}
