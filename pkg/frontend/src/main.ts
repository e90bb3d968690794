import { createApp } from "./ui";
import "./style.css";

const root = document.getElementById("app");
if (!root) throw new Error("missing #app mount point");

createApp(root, {
  // same-origin API by default; override for a dev server on another port
  baseUrl: root.dataset.apiBase ?? "",
});
