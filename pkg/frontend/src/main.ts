import { ReviewClient } from "./api.js";
import { App } from "./app.js";

const root = document.getElementById("app");
if (!root) throw new Error("missing #app container");
root.tabIndex = 0; // receive keyboard events

const app = new App(root, new ReviewClient());
void app.start();
root.focus();
