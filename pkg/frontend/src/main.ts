import { mountApp } from "./app.js";

document.addEventListener("DOMContentLoaded", () => {
    const root = document.getElementById("app");
    if (!root) throw new Error("missing #app element");
    const apiBase = root.dataset.apiBase ?? "http://127.0.0.1:8000";
    mountApp(root, { apiBase });
});
