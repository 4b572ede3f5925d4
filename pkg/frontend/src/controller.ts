// DOM-free session state machine; the view layer only renders snapshots.

import { AnswerPayload, ApiClient, DoneNotice, SessionItem, SubmitResult, isDone } from "./api.js";
import { buildAnswer } from "./answers.js";

export type Phase = "idle" | "question" | "feedback" | "done";

export interface Snapshot {
    phase: Phase;
    item: SessionItem | null;
    result: SubmitResult | null;
    answered: number;
    total: number;
    error: string | null;
}

type Clock = () => number;

export class SessionController {
    private sessionId = "";
    private item: SessionItem | null = null;
    private result: SubmitResult | null = null;
    private phase: Phase = "idle";
    private answered = 0;
    private total = 0;
    private error: string | null = null;
    private startedAt = 0;

    constructor(
        private api: ApiClient,
        private clock: Clock = () => Date.now(),
    ) {}

    snapshot(): Snapshot {
        return {
            phase: this.phase,
            item: this.item,
            result: this.result,
            answered: this.answered,
            total: this.total,
            error: this.error,
        };
    }

    async start(nItems: number, raterId: string, seed?: number): Promise<Snapshot> {
        this.sessionId = await this.api.newSession(nItems, raterId, seed);
        return this.advance();
    }

    /** Fetch the next unanswered item, or finish the session. */
    async advance(): Promise<Snapshot> {
        this.error = null;
        this.result = null;
        const next: SessionItem | DoneNotice = await this.api.nextItem(this.sessionId);
        if (isDone(next)) {
            this.phase = "done";
            this.item = null;
            this.answered = next.answered;
            this.total = next.total;
        } else {
            this.phase = "question";
            this.item = next;
            this.total = next.total;
            this.answered = next.index;
            this.startedAt = this.clock();
        }
        return this.snapshot();
    }

    elapsedMs(): number {
        return this.clock() - this.startedAt;
    }

    /** Submit the raw input; rejects malformed input without a round trip. */
    async submit(raw: string): Promise<Snapshot> {
        if (this.phase !== "question" || this.item === null) {
            throw new Error("no question is active");
        }
        const answer = buildAnswer(this.item.answer_type, raw);
        if (answer === null) {
            this.error = "that input is not a valid answer for this format";
            return this.snapshot();
        }
        return this.send(answer);
    }

    async dontKnow(): Promise<Snapshot> {
        if (this.phase !== "question" || this.item === null) {
            throw new Error("no question is active");
        }
        return this.send(null);
    }

    private async send(answer: AnswerPayload | null): Promise<Snapshot> {
        const item = this.item as SessionItem;
        this.result = await this.api.submit(
            this.sessionId,
            item.instance_id,
            answer,
            this.elapsedMs(),
        );
        this.phase = "feedback";
        this.answered = this.result.answered;
        this.total = this.result.total;
        this.error = null;
        return this.snapshot();
    }
}
