import { beforeEach, describe, expect, it, vi } from "vitest";

import type { Candidate, TranslateResponse } from "../src/api.js";
import { mountApp } from "../src/app.js";

const LABELS = {
    concepts: { "CHEMBL1431": "Metformin", "MESH:D003920": "Diabetes Mellitus" },
    predicates: { treats: "treats" },
};

const SPECIFIC: Candidate = {
    strategy: "specific",
    query: {
        statements: [["CHEMBL1431", "treats", "MESH:D003920"]],
        concepts: ["CHEMBL1431", "MESH:D003920"],
        terms: [],
    },
    labels: LABELS,
    result_count: 1,
    excluded_tokens: [],
};

const TRANSLATED: TranslateResponse = { candidates: [SPECIFIC], truncated: false };

const SEARCHED = {
    doc_ids: ["d1"],
    documents: [{ doc_id: "d1", title: "Metformin treats Diabetes Mellitus", abstract: "A trial" }],
    total: 1,
};

function jsonResponse(payload: unknown, status = 200): Response {
    return new Response(JSON.stringify(payload), {
        status,
        headers: { "Content-Type": "application/json" },
    });
}

function flush(): Promise<void> {
    return new Promise((resolve) => setTimeout(resolve, 0));
}

describe("NarqApp", () => {
    let root: HTMLElement;

    beforeEach(() => {
        document.body.innerHTML = "";
        root = document.createElement("div");
        document.body.appendChild(root);
    });

    it("submits keywords and renders the candidate cards", async () => {
        const fetchFn = vi.fn().mockResolvedValue(jsonResponse(TRANSLATED));
        const app = mountApp(root, { fetchFn });
        app.input.value = "Metformin treats Diabetes Mellitus";
        await app.submitKeywords(app.input.value);
        expect(fetchFn).toHaveBeenCalledWith(
            "/api/translate",
            expect.objectContaining({ method: "POST" }),
        );
        const body = JSON.parse((fetchFn.mock.calls[0][1] as RequestInit).body as string);
        expect(body).toEqual({ keywords: "Metformin treats Diabetes Mellitus" });
        expect(root.querySelectorAll(".candidate-card")).toHaveLength(1);
        expect(app.banner.hidden).toBe(true);
    });

    it("keeps the input and shows a banner on service errors", async () => {
        const fetchFn = vi
            .fn()
            .mockResolvedValue(jsonResponse({ error: "keywords must be a non-empty string" }, 400));
        const app = mountApp(root, { fetchFn });
        app.input.value = "metformin";
        await app.submitKeywords("metformin");
        expect(app.banner.hidden).toBe(false);
        expect(app.banner.textContent).toMatch(/keywords/);
        expect(app.input.value).toBe("metformin");
    });

    it("shows a banner when the service is unreachable", async () => {
        const fetchFn = vi.fn().mockRejectedValue(new TypeError("fetch failed"));
        const app = mountApp(root, { fetchFn });
        await app.submitKeywords("metformin");
        expect(app.banner.hidden).toBe(false);
        expect(app.banner.textContent).toMatch(/unreachable/);
    });

    it("posts the selected query verbatim and renders matching results", async () => {
        const fetchFn = vi.fn().mockResolvedValue(jsonResponse(SEARCHED));
        const app = mountApp(root, { fetchFn });
        await app.selectCandidate(SPECIFIC);

        const body = JSON.parse((fetchFn.mock.calls[0][1] as RequestInit).body as string);
        expect(body.query).toEqual(SPECIFIC.query);

        const pinned = root.querySelector(".pinned-query") as HTMLElement;
        expect(JSON.parse(pinned.dataset.query!)).toEqual(body.query);
        expect(pinned.querySelector("svg.query-graph")).not.toBeNull();

        const rows = root.querySelectorAll(".result-row");
        expect(rows).toHaveLength(1);
        expect(root.querySelector(".result-total")!.textContent).toBe("1 result");
        expect(rows[0].querySelector("h3")!.textContent).toBe(
            "Metformin treats Diabetes Mellitus",
        );
    });

    it("discards stale translate responses", async () => {
        let resolveFirst!: (r: Response) => void;
        const first = new Promise<Response>((resolve) => (resolveFirst = resolve));
        const second = Promise.resolve(
            jsonResponse({
                candidates: [
                    { ...SPECIFIC, strategy: "mixed", query: { statements: [], concepts: [], terms: ["beta"] } },
                ],
                truncated: false,
            }),
        );
        const fetchFn = vi
            .fn()
            .mockImplementationOnce(() => first)
            .mockImplementationOnce(() => second);
        const app = mountApp(root, { fetchFn });

        const older = app.submitKeywords("alpha");
        const newer = app.submitKeywords("beta");
        await newer;
        resolveFirst(jsonResponse(TRANSLATED)); // the stale answer arrives last
        await older;
        await flush();

        const cards = root.querySelectorAll(".candidate-card");
        expect(cards).toHaveLength(1);
        expect((cards[0] as HTMLElement).dataset.strategy).toBe("mixed");
    });

    it("toggles concept highlighting via the root class", () => {
        const app = mountApp(root, { fetchFn: vi.fn() });
        expect(root.classList.contains("highlight")).toBe(false);
        app.highlightToggle.checked = true;
        app.highlightToggle.dispatchEvent(new Event("change"));
        expect(root.classList.contains("highlight")).toBe(true);
    });
});
