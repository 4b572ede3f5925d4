import { ApiClient } from "./api.js";
import { SessionController } from "./controller.js";
import { render } from "./view.js";

const DEFAULT_ITEMS = 20;

function setup() {
    const root = document.getElementById("app");
    if (!root) {
        throw new Error("missing #app element");
    }
    const controller = new SessionController(new ApiClient());

    const draw = () => render(root, controller.snapshot(), handlers);
    const handlers = {
        onSubmit: (raw: string) => controller.submit(raw).then(draw, showError),
        onDontKnow: () => controller.dontKnow().then(draw, showError),
        onNext: () => controller.advance().then(draw, showError),
    };

    function showError(err: unknown) {
        root!.replaceChildren();
        const p = document.createElement("p");
        p.className = "error";
        p.textContent = String(err);
        root!.appendChild(p);
    }

    const params = new URLSearchParams(window.location.search);
    const nItems = parseInt(params.get("n") ?? "", 10) || DEFAULT_ITEMS;
    const raterId = params.get("rater") ?? "anonymous";
    controller.start(nItems, raterId).then(draw, showError);
}

document.addEventListener("DOMContentLoaded", setup);
