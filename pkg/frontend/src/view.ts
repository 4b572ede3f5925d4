// DOM rendering for the controller snapshots.

import { SessionItem } from "./api.js";
import { formatAnswer, inputHint } from "./answers.js";
import { Snapshot } from "./controller.js";

export interface ViewHandlers {
    onSubmit: (raw: string) => void;
    onDontKnow: () => void;
    onNext: () => void;
}

function el<K extends keyof HTMLElementTagNameMap>(
    tag: K,
    className?: string,
    text?: string,
): HTMLElementTagNameMap[K] {
    const node = document.createElement(tag);
    if (className) {
        node.className = className;
    }
    if (text !== undefined) {
        node.textContent = text;
    }
    return node;
}

function renderQuestion(root: HTMLElement, item: SessionItem, handlers: ViewHandlers) {
    const progress = el("div", "progress", `Question ${item.index + 1} of ${item.total}`);
    root.appendChild(progress);

    const img = el("img", "puzzle-image");
    img.src = item.image_url;
    img.alt = "puzzle image";
    root.appendChild(img);

    root.appendChild(el("p", "question", item.question));

    let getRaw: () => string;
    if (item.answer_type === "option_label" && item.options) {
        const form = el("div", "options");
        for (const opt of item.options) {
            const label = el("label", "option");
            const radio = el("input");
            radio.type = "radio";
            radio.name = "option";
            radio.value = opt.label;
            label.appendChild(radio);
            label.appendChild(document.createTextNode(` ${opt.label}. ${opt.text}`));
            form.appendChild(label);
        }
        root.appendChild(form);
        getRaw = () => {
            const checked = form.querySelector<HTMLInputElement>("input:checked");
            return checked ? checked.value : "";
        };
    } else {
        const input = el("input", "free-answer");
        input.type = "text";
        input.placeholder = inputHint(item.answer_type);
        root.appendChild(input);
        input.focus();
        getRaw = () => input.value;
    }

    const row = el("div", "buttons");
    const submit = el("button", "submit", "Submit");
    submit.onclick = () => handlers.onSubmit(getRaw());
    const dunno = el("button", "dont-know", "Don't know");
    dunno.onclick = () => handlers.onDontKnow();
    row.appendChild(submit);
    row.appendChild(dunno);
    root.appendChild(row);
}

function renderFeedback(root: HTMLElement, snap: Snapshot, handlers: ViewHandlers) {
    const result = snap.result!;
    if (result.dont_know) {
        root.appendChild(el("p", "feedback skipped", "Skipped."));
    } else if (result.correct) {
        root.appendChild(el("p", "feedback correct", "Correct!"));
    } else {
        root.appendChild(el("p", "feedback wrong", "Not quite."));
    }
    root.appendChild(
        el("p", "truth", `Answer: ${formatAnswer(result.ground_truth)}`),
    );
    root.appendChild(el("div", "progress", `${result.answered} of ${result.total} done`));
    const next = el("button", "next", result.answered < result.total ? "Next" : "Finish");
    next.onclick = () => handlers.onNext();
    root.appendChild(next);
}

export function render(root: HTMLElement, snap: Snapshot, handlers: ViewHandlers) {
    root.replaceChildren();
    if (snap.error) {
        root.appendChild(el("p", "error", snap.error));
    }
    switch (snap.phase) {
        case "question":
            renderQuestion(root, snap.item!, handlers);
            break;
        case "feedback":
            renderFeedback(root, snap, handlers);
            break;
        case "done":
            root.appendChild(el("h2", undefined, "Session complete"));
            root.appendChild(
                el("p", "progress", `You answered ${snap.answered} of ${snap.total} items.`),
            );
            break;
        default:
            root.appendChild(el("p", undefined, "Starting..."));
    }
}
