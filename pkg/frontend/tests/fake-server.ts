// In-memory stand-in for the rating service, mirroring its JSON contract.
// Used to exercise the client against the same behavior the Python
// service implements: ground truth only appears after a submission.

import { AnswerPayload, FetchLike } from "../src/api";

export interface FakeInstance {
    instance_id: string;
    task_id: string;
    topology: string;
    question: string;
    options: { label: string; text: string }[] | null;
    answer_type: AnswerPayload["type"];
    grid: { major: number; minor: number };
    ground_truth: AnswerPayload;
}

interface LogEntry {
    type: "response";
    session_id: string;
    instance_id: string;
    task_id: string;
    topology: string;
    answer: AnswerPayload | null;
    dont_know: boolean;
    correct: boolean | null;
    elapsed_ms: number | null;
    ts: number;
}

function sameAnswer(a: AnswerPayload, b: AnswerPayload): boolean {
    if (a.type !== b.type) {
        return false;
    }
    if (a.type === "string") {
        return String(a.value).trim().toLowerCase() === String(b.value).trim().toLowerCase();
    }
    return JSON.stringify(a.value) === JSON.stringify(b.value);
}

export class FakeServer {
    log: LogEntry[] = [];
    requests: { url: string; body: unknown }[] = [];
    private sessions = new Map<string, { items: string[]; answered: Set<string> }>();
    private byId = new Map<string, FakeInstance>();

    constructor(private instances: FakeInstance[]) {
        for (const inst of instances) {
            this.byId.set(inst.instance_id, inst);
        }
    }

    fetch: FetchLike = async (url, init) => {
        const body = init?.body ? JSON.parse(String(init.body)) : null;
        this.requests.push({ url, body });
        return this.route(url, body);
    };

    private json(status: number, payload: unknown): Response {
        return new Response(JSON.stringify(payload), {
            status,
            headers: { "Content-Type": "application/json" },
        });
    }

    private route(url: string, body: any): Response {
        if (url.endsWith("/api/session/new")) {
            const n = Math.min(body.n_items, this.instances.length);
            const id = `fake-${this.sessions.size}`;
            this.sessions.set(id, {
                items: this.instances.slice(0, n).map((i) => i.instance_id),
                answered: new Set(),
            });
            return this.json(200, { session_id: id, n_items: n });
        }
        const nextMatch = url.match(/\/api\/session\/([^/]+)\/next$/);
        if (nextMatch) {
            const sess = this.sessions.get(nextMatch[1]);
            if (!sess) {
                return this.json(404, { detail: "unknown session" });
            }
            for (let i = 0; i < sess.items.length; i++) {
                const iid = sess.items[i];
                if (!sess.answered.has(iid)) {
                    const inst = this.byId.get(iid)!;
                    const { ground_truth, ...visible } = inst;
                    return this.json(200, {
                        ...visible,
                        image_url: `/images/${iid}.svg`,
                        index: i,
                        total: sess.items.length,
                    });
                }
            }
            return this.json(200, {
                done: true,
                answered: sess.answered.size,
                total: sess.items.length,
            });
        }
        const respMatch = url.match(/\/api\/session\/([^/]+)\/response$/);
        if (respMatch) {
            const sess = this.sessions.get(respMatch[1]);
            if (!sess) {
                return this.json(404, { detail: "unknown session" });
            }
            const iid = body.instance_id;
            if (!sess.items.includes(iid)) {
                return this.json(422, { detail: "instance not in session" });
            }
            if (sess.answered.has(iid)) {
                return this.json(409, { detail: "already answered" });
            }
            const inst = this.byId.get(iid)!;
            const dontKnow = Boolean(body.dont_know);
            let correct: boolean | null = null;
            if (!dontKnow) {
                if (!body.answer || typeof body.answer.type !== "string") {
                    return this.json(422, { detail: "bad answer" });
                }
                correct = sameAnswer(body.answer, inst.ground_truth);
            }
            sess.answered.add(iid);
            this.log.push({
                type: "response",
                session_id: respMatch[1],
                instance_id: iid,
                task_id: inst.task_id,
                topology: inst.topology,
                answer: dontKnow ? null : body.answer,
                dont_know: dontKnow,
                correct,
                elapsed_ms: body.elapsed_ms ?? null,
                ts: Date.now() / 1000,
            });
            return this.json(200, {
                correct,
                dont_know: dontKnow,
                ground_truth: inst.ground_truth,
                answered: sess.answered.size,
                total: sess.items.length,
            });
        }
        if (url.endsWith("/api/report/human")) {
            return this.json(200, this.report());
        }
        return this.json(404, { detail: "no route" });
    }

    private block(group: LogEntry[]) {
        const scored = group.filter((e) => !e.dont_know);
        const timed = group.filter((e) => e.elapsed_ms !== null);
        return {
            n: group.length,
            accuracy: scored.length
                ? (100 * scored.filter((e) => e.correct).length) / scored.length
                : null,
            dont_know_rate: group.length
                ? (100 * (group.length - scored.length)) / group.length
                : null,
            avg_elapsed_ms: timed.length
                ? timed.reduce((s, e) => s + (e.elapsed_ms as number), 0) / timed.length
                : null,
        };
    }

    report() {
        const byTopology: Record<string, LogEntry[]> = {};
        const byTaskTopology: Record<string, LogEntry[]> = {};
        for (const e of this.log) {
            (byTopology[e.topology] ??= []).push(e);
            (byTaskTopology[`${e.task_id}/${e.topology}`] ??= []).push(e);
        }
        const mapBlocks = (groups: Record<string, LogEntry[]>) =>
            Object.fromEntries(Object.entries(groups).map(([k, v]) => [k, this.block(v)]));
        return {
            n_responses: this.log.length,
            n_raters: 1,
            overall: this.block(this.log),
            by_topology: mapBlocks(byTopology),
            by_task_topology: mapBlocks(byTaskTopology),
        };
    }
}

export function sampleInstances(): FakeInstance[] {
    return [
        {
            instance_id: "sudoku_cartesian_000000",
            task_id: "sudoku",
            topology: "cartesian",
            question: "Which digit belongs in the highlighted cell?",
            options: [
                { label: "A", text: "3" },
                { label: "B", text: "7" },
                { label: "C", text: "1" },
                { label: "D", text: "9" },
                { label: "E", text: "4" },
            ],
            answer_type: "option_label",
            grid: { major: 9, minor: 9 },
            ground_truth: { type: "option_label", value: "B" },
        },
        {
            instance_id: "lattice_paths_polar_000000",
            task_id: "lattice_paths",
            topology: "polar",
            question: "How many distinct paths lead from S to E?",
            options: null,
            answer_type: "digit",
            grid: { major: 4, minor: 4 },
            ground_truth: { type: "digit", value: 13 },
        },
        {
            instance_id: "bouncing_point_cartesian_000001",
            task_id: "bouncing_point",
            topology: "cartesian",
            question: "Where does the point end up after 7 steps?",
            options: null,
            answer_type: "coordinate",
            grid: { major: 3, minor: 8 },
            ground_truth: { type: "coordinate", value: [1, 4] },
        },
        {
            instance_id: "pipe_lengths_polar_000001",
            task_id: "pipe_lengths",
            topology: "polar",
            question: "List the pipe lengths, largest first.",
            options: null,
            answer_type: "int_list",
            grid: { major: 3, minor: 4 },
            ground_truth: { type: "int_list", value: [5, 4, 3] },
        },
    ];
}
