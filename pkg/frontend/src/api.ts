// Typed client for the rating service JSON API.

export type AnswerType = "option_label" | "digit" | "coordinate" | "string" | "int_list";

export interface AnswerPayload {
    type: AnswerType;
    value: string | number | number[];
}

export interface OptionEntry {
    label: string;
    text: string;
}

export interface SessionItem {
    instance_id: string;
    task_id: string;
    topology: string;
    question: string;
    options: OptionEntry[] | null;
    answer_type: AnswerType;
    grid: { major: number; minor: number };
    image_url: string;
    index: number;
    total: number;
}

export interface DoneNotice {
    done: true;
    answered: number;
    total: number;
}

export interface SubmitResult {
    correct: boolean | null;
    dont_know: boolean;
    ground_truth: AnswerPayload;
    answered: number;
    total: number;
}

export interface ReportBlock {
    n: number;
    accuracy: number | null;
    dont_know_rate: number | null;
    avg_elapsed_ms: number | null;
}

export interface HumanReport {
    n_responses: number;
    n_raters: number;
    overall: ReportBlock;
    by_topology: Record<string, ReportBlock>;
    by_task_topology: Record<string, ReportBlock>;
}

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

async function asJson<T>(res: Response): Promise<T> {
    if (!res.ok) {
        let detail = "";
        try {
            detail = JSON.stringify(await res.json());
        } catch {
            detail = res.statusText;
        }
        throw new Error(`HTTP ${res.status}: ${detail}`);
    }
    return res.json() as Promise<T>;
}

export class ApiClient {
    constructor(
        private baseUrl: string = "",
        private fetchFn: FetchLike = (url, init) => fetch(url, init),
    ) {}

    async newSession(nItems: number, raterId: string, seed?: number): Promise<string> {
        const body: Record<string, unknown> = { n_items: nItems, rater_id: raterId };
        if (seed !== undefined) {
            body.seed = seed;
        }
        const res = await this.fetchFn(`${this.baseUrl}/api/session/new`, {
            method: "POST",
            headers: { "Content-Type": "application/json" },
            body: JSON.stringify(body),
        });
        const data = await asJson<{ session_id: string }>(res);
        return data.session_id;
    }

    async nextItem(sessionId: string): Promise<SessionItem | DoneNotice> {
        const res = await this.fetchFn(`${this.baseUrl}/api/session/${sessionId}/next`);
        return asJson<SessionItem | DoneNotice>(res);
    }

    async submit(
        sessionId: string,
        instanceId: string,
        answer: AnswerPayload | null,
        elapsedMs: number,
    ): Promise<SubmitResult> {
        const body: Record<string, unknown> = {
            instance_id: instanceId,
            elapsed_ms: Math.round(elapsedMs),
        };
        if (answer === null) {
            body.dont_know = true;
        } else {
            body.answer = answer;
        }
        const res = await this.fetchFn(`${this.baseUrl}/api/session/${sessionId}/response`, {
            method: "POST",
            headers: { "Content-Type": "application/json" },
            body: JSON.stringify(body),
        });
        return asJson<SubmitResult>(res);
    }

    async humanReport(): Promise<HumanReport> {
        const res = await this.fetchFn(`${this.baseUrl}/api/report/human`);
        return asJson<HumanReport>(res);
    }
}

export function isDone(item: SessionItem | DoneNotice): item is DoneNotice {
    return (item as DoneNotice).done === true;
}
