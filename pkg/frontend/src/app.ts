// Interactive loop: enter keywords, pick one of the generated query variants,
// read the matching documents. The service is stateless; the selected query is
// posted back exactly as it was received.

import { ApiClient, ApiError, Candidate, SearchResponse } from "./api.js";
import { renderCandidates } from "./cards.js";
import { renderQueryGraph } from "./graph.js";

export interface AppOptions {
    apiBase?: string;
    fetchFn?: typeof fetch;
}

export class NarqApp {
    readonly client: ApiClient;
    private readonly doc: Document;

    readonly form: HTMLFormElement;
    readonly input: HTMLInputElement;
    readonly banner: HTMLElement;
    readonly candidatesHost: HTMLElement;
    readonly resultsHost: HTMLElement;
    readonly highlightToggle: HTMLInputElement;

    // at most one in-flight translate and one in-flight search; stale
    // responses are discarded by comparing sequence numbers
    private translateSeq = 0;
    private searchSeq = 0;

    constructor(readonly root: HTMLElement, options: AppOptions = {}) {
        this.doc = root.ownerDocument;
        this.client = new ApiClient(options.apiBase ?? "", options.fetchFn);

        this.form = this.doc.createElement("form");
        this.form.className = "search-form";
        this.input = this.doc.createElement("input");
        this.input.type = "search";
        this.input.placeholder = "Enter keywords, e.g. Metformin treats Diabetes Mellitus";
        this.input.setAttribute("aria-label", "keyword query");
        const button = this.doc.createElement("button");
        button.type = "submit";
        button.textContent = "Search";

        const highlightLabel = this.doc.createElement("label");
        highlightLabel.className = "highlight-toggle";
        this.highlightToggle = this.doc.createElement("input");
        this.highlightToggle.type = "checkbox";
        highlightLabel.append(this.highlightToggle, this.doc.createTextNode(" highlight concepts"));

        this.form.append(this.input, button, highlightLabel);

        this.banner = this.doc.createElement("div");
        this.banner.className = "error-banner";
        this.banner.setAttribute("role", "alert");
        this.banner.hidden = true;

        this.candidatesHost = this.doc.createElement("div");
        this.candidatesHost.className = "candidates-host";
        this.resultsHost = this.doc.createElement("div");
        this.resultsHost.className = "results-host";

        root.append(this.form, this.banner, this.candidatesHost, this.resultsHost);

        this.form.addEventListener("submit", (event) => {
            event.preventDefault();
            void this.submitKeywords(this.input.value);
        });
        this.highlightToggle.addEventListener("change", () => {
            this.root.classList.toggle("highlight", this.highlightToggle.checked);
        });
    }

    private showError(message: string): void {
        this.banner.textContent = message;
        this.banner.hidden = false;
    }

    private clearError(): void {
        this.banner.hidden = true;
        this.banner.textContent = "";
    }

    async submitKeywords(text: string): Promise<void> {
        const keywords = text.trim();
        if (!keywords) {
            this.showError("Please enter a keyword query.");
            return;
        }
        const seq = ++this.translateSeq;
        try {
            const response = await this.client.translate(keywords);
            if (seq !== this.translateSeq) return; // superseded by a newer query
            this.clearError();
            this.resultsHost.replaceChildren();
            const cards = renderCandidates(
                response.candidates,
                { onSelect: (candidate) => void this.selectCandidate(candidate) },
                this.doc,
            );
            if (response.truncated) {
                const note = this.doc.createElement("p");
                note.className = "truncated-note";
                note.textContent = "Query generation was truncated; candidates may be incomplete.";
                cards.prepend(note);
            }
            this.candidatesHost.replaceChildren(cards);
        } catch (err) {
            if (seq !== this.translateSeq) return;
            this.showError(err instanceof ApiError ? err.message : String(err));
        }
    }

    async selectCandidate(candidate: Candidate): Promise<void> {
        const seq = ++this.searchSeq;
        try {
            // the query object is posted verbatim and also drives the pinned view
            const response = await this.client.search(candidate.query);
            if (seq !== this.searchSeq) return;
            this.clearError();
            this.renderResults(candidate, response);
        } catch (err) {
            if (seq !== this.searchSeq) return;
            this.showError(err instanceof ApiError ? err.message : String(err));
        }
    }

    private renderResults(candidate: Candidate, response: SearchResponse): void {
        const section = this.doc.createElement("section");
        section.className = "results";

        const pinned = this.doc.createElement("div");
        pinned.className = "pinned-query";
        pinned.dataset.query = JSON.stringify(candidate.query);
        const heading = this.doc.createElement("h2");
        heading.textContent = `Results for the ${candidate.strategy} query`;
        pinned.appendChild(heading);
        const graph = renderQueryGraph(candidate.query, candidate.labels, this.doc);
        if (graph) pinned.appendChild(graph);
        if (candidate.query.terms.length) {
            const terms = this.doc.createElement("p");
            terms.className = "term-list";
            terms.textContent = `Terms: ${[...candidate.query.terms].sort().join(", ")}`;
            pinned.appendChild(terms);
        }
        section.appendChild(pinned);

        const count = this.doc.createElement("p");
        count.className = "result-total";
        count.textContent = `${response.total} result${response.total === 1 ? "" : "s"}`;
        section.appendChild(count);

        const list = this.doc.createElement("ul");
        list.className = "result-list";
        for (const docRow of response.documents) {
            const item = this.doc.createElement("li");
            item.className = "result-row";
            item.dataset.docId = docRow.doc_id;
            const title = this.doc.createElement("h3");
            title.textContent = docRow.title;
            const abstract = this.doc.createElement("p");
            abstract.textContent = docRow.abstract;
            item.append(title, abstract);
            list.appendChild(item);
        }
        section.appendChild(list);
        this.resultsHost.replaceChildren(section);
    }
}

export function mountApp(root: HTMLElement, options: AppOptions = {}): NarqApp {
    return new NarqApp(root, options);
}
