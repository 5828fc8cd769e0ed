// Directed labeled graph rendering for narrative queries: concepts are nodes,
// statements are edges labeled with their predicate. Layout is a simple
// left-to-right layering; nodes never overlap. Monochrome by default, an
// optional "highlight" class on the container tints concept nodes.

import type { QueryLabels, WireQuery } from "./api.js";

const SVG_NS = "http://www.w3.org/2000/svg";

const NODE_HEIGHT = 34;
const H_GAP = 70;
const V_GAP = 20;
const PADDING = 12;

export interface LaidOutNode {
    id: string;
    label: string;
    x: number;
    y: number;
    width: number;
    height: number;
}

export interface LaidOutEdge {
    from: string;
    to: string;
    label: string;
    x1: number;
    y1: number;
    x2: number;
    y2: number;
}

export interface GraphLayout {
    nodes: LaidOutNode[];
    edges: LaidOutEdge[];
    width: number;
    height: number;
}

function nodeWidth(label: string): number {
    return Math.max(72, label.length * 8 + 24);
}

function assignLayers(ids: string[], edges: { from: string; to: string }[]): Map<string, number> {
    const layer = new Map<string, number>();
    const incoming = new Map<string, string[]>();
    const outgoing = new Map<string, string[]>();
    for (const id of ids) {
        incoming.set(id, []);
        outgoing.set(id, []);
    }
    for (const edge of edges) {
        incoming.get(edge.to)!.push(edge.from);
        outgoing.get(edge.from)!.push(edge.to);
    }

    // Kahn peeling; a node's layer is one past its furthest processed source.
    const pendingIncoming = new Map(ids.map((id) => [id, incoming.get(id)!.length]));
    const queue = ids.filter((id) => pendingIncoming.get(id) === 0).sort();
    for (const id of queue) layer.set(id, 0);
    let cursor = 0;
    while (cursor < queue.length) {
        const current = queue[cursor++];
        for (const next of [...outgoing.get(current)!].sort()) {
            layer.set(next, Math.max(layer.get(next) ?? 0, layer.get(current)! + 1));
            pendingIncoming.set(next, pendingIncoming.get(next)! - 1);
            if (pendingIncoming.get(next) === 0) queue.push(next);
        }
    }
    // Cycles (a pair of opposite statements) leave nodes unprocessed: stack
    // them on fresh layers in deterministic order.
    let overflow = Math.max(-1, ...layer.values()) + 1;
    for (const id of ids) {
        if (!layer.has(id)) layer.set(id, overflow++);
    }
    return layer;
}

export function buildLayout(query: WireQuery, labels: QueryLabels): GraphLayout {
    const ids = [...query.concepts].sort();
    const edges = query.statements.map(([from, predicate, to]) => ({
        from,
        to,
        label: labels.predicates[predicate] ?? predicate,
    }));
    const layerOf = assignLayers(ids, edges);

    const byLayer = new Map<number, string[]>();
    for (const id of ids) {
        const l = layerOf.get(id)!;
        if (!byLayer.has(l)) byLayer.set(l, []);
        byLayer.get(l)!.push(id);
    }

    const nodes = new Map<string, LaidOutNode>();
    let x = PADDING;
    let height = 0;
    for (const l of [...byLayer.keys()].sort((a, b) => a - b)) {
        const column = byLayer.get(l)!.sort();
        const columnWidth = Math.max(
            ...column.map((id) => nodeWidth(labels.concepts[id] ?? id)),
        );
        column.forEach((id, row) => {
            const label = labels.concepts[id] ?? id;
            const y = PADDING + row * (NODE_HEIGHT + V_GAP);
            nodes.set(id, {
                id,
                label,
                x,
                y,
                width: nodeWidth(label),
                height: NODE_HEIGHT,
            });
            height = Math.max(height, y + NODE_HEIGHT);
        });
        x += columnWidth + H_GAP;
    }

    const laidEdges: LaidOutEdge[] = edges.map((edge) => {
        const from = nodes.get(edge.from)!;
        const to = nodes.get(edge.to)!;
        const leftToRight = from.x <= to.x;
        return {
            from: edge.from,
            to: edge.to,
            label: edge.label,
            x1: leftToRight ? from.x + from.width : from.x,
            y1: from.y + from.height / 2,
            x2: leftToRight ? to.x : to.x + to.width,
            y2: to.y + to.height / 2,
        };
    });

    return {
        nodes: [...nodes.values()],
        edges: laidEdges,
        width: Math.max(x - H_GAP + PADDING, PADDING * 2),
        height: height + PADDING,
    };
}

function svgEl<K extends keyof SVGElementTagNameMap>(
    doc: Document,
    tag: K,
    attrs: Record<string, string>,
): SVGElementTagNameMap[K] {
    const el = doc.createElementNS(SVG_NS, tag);
    for (const [key, value] of Object.entries(attrs)) el.setAttribute(key, value);
    return el;
}

/** Render the query's concept/statement graph; null when there is no graph to draw. */
export function renderQueryGraph(
    query: WireQuery,
    labels: QueryLabels,
    doc: Document = document,
): SVGSVGElement | null {
    if (query.concepts.length === 0) return null;
    const layout = buildLayout(query, labels);

    const svg = svgEl(doc, "svg", {
        class: "query-graph",
        width: String(layout.width),
        height: String(layout.height),
        viewBox: `0 0 ${layout.width} ${layout.height}`,
        role: "img",
    });

    const defs = svgEl(doc, "defs", {});
    const marker = svgEl(doc, "marker", {
        id: "arrow",
        viewBox: "0 0 10 10",
        refX: "9",
        refY: "5",
        markerWidth: "7",
        markerHeight: "7",
        orient: "auto-start-reverse",
    });
    marker.appendChild(svgEl(doc, "path", { d: "M 0 0 L 10 5 L 0 10 z", class: "edge-arrow" }));
    defs.appendChild(marker);
    svg.appendChild(defs);

    for (const edge of layout.edges) {
        const line = svgEl(doc, "line", {
            class: "edge-line",
            x1: String(edge.x1),
            y1: String(edge.y1),
            x2: String(edge.x2),
            y2: String(edge.y2),
            "marker-end": "url(#arrow)",
        });
        svg.appendChild(line);
        const text = svgEl(doc, "text", {
            class: "edge-label",
            x: String((edge.x1 + edge.x2) / 2),
            y: String((edge.y1 + edge.y2) / 2 - 6),
            "text-anchor": "middle",
        });
        text.textContent = edge.label;
        svg.appendChild(text);
    }

    for (const node of layout.nodes) {
        const group = svgEl(doc, "g", { class: "concept-node", "data-concept": node.id });
        group.appendChild(
            svgEl(doc, "rect", {
                x: String(node.x),
                y: String(node.y),
                width: String(node.width),
                height: String(node.height),
                rx: "8",
            }),
        );
        const text = svgEl(doc, "text", {
            x: String(node.x + node.width / 2),
            y: String(node.y + node.height / 2 + 4),
            "text-anchor": "middle",
        });
        text.textContent = node.label;
        group.appendChild(text);
        svg.appendChild(group);
    }

    return svg;
}
