// Turning raw widget input into answer payloads, one rule per answer format.

import { AnswerPayload, AnswerType } from "./api.js";

const INT_RE = /^-?\d+$/;

function parseInts(text: string): number[] | null {
    const parts = text
        .replace(/[[\]()]/g, "")
        .split(",")
        .map((p) => p.trim())
        .filter((p) => p.length > 0);
    if (parts.length === 0 || !parts.every((p) => INT_RE.test(p))) {
        return null;
    }
    return parts.map((p) => parseInt(p, 10));
}

/** Build the submission payload, or null when the input is not usable. */
export function buildAnswer(type: AnswerType, raw: string): AnswerPayload | null {
    const text = raw.trim();
    if (text.length === 0) {
        return null;
    }
    switch (type) {
        case "option_label": {
            const label = text.toUpperCase();
            return /^[A-F]$/.test(label) ? { type, value: label } : null;
        }
        case "digit": {
            return INT_RE.test(text) ? { type, value: parseInt(text, 10) } : null;
        }
        case "coordinate": {
            const nums = parseInts(text);
            return nums !== null && nums.length === 2 ? { type, value: nums } : null;
        }
        case "string": {
            return /^[A-Za-z]+$/.test(text) ? { type, value: text.toUpperCase() } : null;
        }
        case "int_list": {
            const nums = parseInts(text);
            return nums !== null ? { type, value: nums } : null;
        }
    }
}

export function formatAnswer(answer: AnswerPayload): string {
    if (answer.type === "coordinate") {
        const [a, b] = answer.value as number[];
        return `(${a}, ${b})`;
    }
    if (answer.type === "int_list") {
        return `[${(answer.value as number[]).join(", ")}]`;
    }
    return String(answer.value);
}

/** Placeholder hint shown in the free-form input for each format. */
export function inputHint(type: AnswerType): string {
    switch (type) {
        case "option_label":
            return "pick an option";
        case "digit":
            return "e.g. 12";
        case "coordinate":
            return "e.g. 2, 5";
        case "string":
            return "e.g. CAT";
        case "int_list":
            return "largest first, e.g. 5, 3, 2";
    }
}
