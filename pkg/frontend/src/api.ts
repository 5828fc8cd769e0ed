// Wire types and client for the narq service API.

export type WireStatement = [string, string, string];

export interface WireQuery {
    statements: WireStatement[];
    concepts: string[];
    terms: string[];
}

export interface QueryLabels {
    concepts: Record<string, string>;
    predicates: Record<string, string>;
}

export interface Candidate {
    strategy: string;
    query: WireQuery;
    labels: QueryLabels;
    result_count: number;
    excluded_tokens: string[];
}

export interface TranslateResponse {
    candidates: Candidate[];
    truncated: boolean;
}

export interface SearchDocument {
    doc_id: string;
    title: string;
    abstract: string;
}

export interface SearchResponse {
    doc_ids: string[];
    documents: SearchDocument[];
    total: number;
}

export class ApiError extends Error {
    constructor(readonly status: number, message: string) {
        super(message);
        this.name = "ApiError";
    }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
    private readonly fetchFn: FetchLike;

    constructor(readonly baseUrl: string = "", fetchFn?: FetchLike) {
        // bind so the client works with both window.fetch and node's fetch
        const fn = fetchFn ?? globalThis.fetch;
        this.fetchFn = (input, init) => fn(input, init);
    }

    private async post<T>(path: string, body: unknown): Promise<T> {
        let response: Response;
        try {
            response = await this.fetchFn(`${this.baseUrl}${path}`, {
                method: "POST",
                headers: { "Content-Type": "application/json" },
                body: JSON.stringify(body),
            });
        } catch (err) {
            throw new ApiError(0, `service unreachable: ${String(err)}`);
        }
        const payload = await response.json().catch(() => ({}));
        if (!response.ok) {
            const message =
                typeof payload === "object" && payload !== null && "error" in payload
                    ? String((payload as { error: unknown }).error)
                    : `request failed with status ${response.status}`;
            throw new ApiError(response.status, message);
        }
        return payload as T;
    }

    translate(keywords: string): Promise<TranslateResponse> {
        return this.post<TranslateResponse>("/api/translate", { keywords });
    }

    search(query: WireQuery): Promise<SearchResponse> {
        return this.post<SearchResponse>("/api/search", { query });
    }
}
