// Candidate cards: one per strategy, each drawing the query graph, the term
// list, the result count badge, and any excluded tokens (dimmed).

import type { Candidate } from "./api.js";
import { renderQueryGraph } from "./graph.js";

export interface CardHandlers {
    onSelect: (candidate: Candidate) => void;
}

function termLine(doc: Document, terms: string[]): HTMLElement {
    const line = doc.createElement("p");
    line.className = "term-list";
    line.textContent = terms.length ? `Terms: ${terms.join(", ")}` : "";
    return line;
}

export function renderCandidateCard(
    candidate: Candidate,
    handlers: CardHandlers,
    doc: Document = document,
): HTMLElement {
    const card = doc.createElement("article");
    card.className = "candidate-card";
    card.dataset.strategy = candidate.strategy;
    card.tabIndex = 0;

    const header = doc.createElement("header");
    const tag = doc.createElement("span");
    tag.className = "strategy-tag";
    tag.textContent = candidate.strategy;
    const badge = doc.createElement("span");
    badge.className = "result-count";
    badge.textContent = `${candidate.result_count} result${candidate.result_count === 1 ? "" : "s"}`;
    header.append(tag, badge);
    card.appendChild(header);

    const graph = renderQueryGraph(candidate.query, candidate.labels, doc);
    if (graph) card.appendChild(graph);

    if (candidate.query.terms.length) {
        card.appendChild(termLine(doc, [...candidate.query.terms].sort()));
    }

    if (candidate.excluded_tokens.length) {
        const excluded = doc.createElement("p");
        excluded.className = "excluded-tokens";
        excluded.textContent = `Excluded: ${candidate.excluded_tokens.join(", ")}`;
        card.appendChild(excluded);
    }

    const choose = () => handlers.onSelect(candidate);
    card.addEventListener("click", choose);
    card.addEventListener("keydown", (event) => {
        if ((event as KeyboardEvent).key === "Enter") choose();
    });
    return card;
}

export function renderCandidates(
    candidates: Candidate[],
    handlers: CardHandlers,
    doc: Document = document,
): HTMLElement {
    const container = doc.createElement("section");
    container.className = "candidates";
    if (!candidates.length) {
        const empty = doc.createElement("p");
        empty.className = "empty-state";
        empty.textContent = "No query could be generated from these keywords.";
        container.appendChild(empty);
        return container;
    }
    for (const candidate of candidates) {
        container.appendChild(renderCandidateCard(candidate, handlers, doc));
    }
    return container;
}
