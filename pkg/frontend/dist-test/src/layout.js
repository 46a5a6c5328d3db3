/** Deterministic layered layout seeded by state order; positions are view
 * state only and may be overridden by dragging. */
export const NODE_WIDTH = 190;
export const LAYER_GAP = 260;
export const ROW_GAP = 40;
export function layeredLayout(model) {
    const ids = model.states.map((s) => s.id).sort();
    const succ = new Map(ids.map((id) => [id, []]));
    const hasIncoming = new Set();
    for (const [a, b] of model.transitions) {
        succ.get(a).push(b);
        if (a !== b)
            hasIncoming.add(b);
    }
    const layer = new Map();
    const queue = [];
    const roots = ids.filter((id) => !hasIncoming.has(id));
    for (const id of (roots.length ? roots : ids.slice(0, 1))) {
        layer.set(id, 0);
        queue.push(id);
    }
    while (queue.length) {
        const x = queue.shift();
        for (const t of [...succ.get(x)].sort()) {
            if (!layer.has(t)) {
                layer.set(t, layer.get(x) + 1);
                queue.push(t);
            }
        }
    }
    for (const id of ids) {
        if (!layer.has(id))
            layer.set(id, 0);
    }
    const counts = new Map();
    const positions = new Map();
    let maxRow = 0;
    for (const id of ids) {
        const l = layer.get(id);
        const row = counts.get(l) ?? 0;
        counts.set(l, row + 1);
        maxRow = Math.max(maxRow, row);
        positions.set(id, { x: 40 + l * LAYER_GAP, y: 40 + row * ROW_GAP });
    }
    // Spread rows once the tallest column is known, so tables do not overlap.
    const rowHeight = Math.max(ROW_GAP, 30);
    for (const [id, p] of positions) {
        positions.set(id, { x: p.x, y: 40 + (p.y - 40) / ROW_GAP * (rowHeight + 150) });
    }
    return positions;
}
