import { beforeEach, describe, expect, it } from "vitest";
import { App } from "../src/app.js";
import { ReviewClient } from "../src/api.js";
import { FixtureServer } from "./fixture.js";

let root: HTMLElement;

function mount(server: FixtureServer): App {
  return new App(root, new ReviewClient(server.fetch, "http://fixture"));
}

function candidateRows(): HTMLElement[] {
  return Array.from(root.querySelectorAll<HTMLElement>(".candidate:not(.reject-all)"));
}

function submitButton(): HTMLButtonElement {
  const btn = root.querySelector<HTMLButtonElement>("button.submit");
  if (!btn) throw new Error("submit button missing");
  return btn;
}

beforeEach(() => {
  document.body.innerHTML = '<div id="app"></div>';
  root = document.getElementById("app")!;
});

describe("App", () => {
  it("shows the oldest task with candidates in descending score order", async () => {
    const app = mount(new FixtureServer());
    await app.start();

    expect(root.querySelector(".source-head")?.textContent).toBe("MSH D000544");
    expect(root.querySelectorAll(".source-term")).toHaveLength(2);

    const rows = candidateRows();
    expect(rows.length).toBeLessThanOrEqual(5);
    const scores = rows.map((r) => Number(r.textContent!.match(/, (\d\.\d\d)\)/)![1]));
    expect(scores).toEqual([...scores].sort((a, b) => b - a));
    expect(rows[0].textContent).toContain("MC00000012");
    expect(rows[0].textContent).toContain("Disease");
  });

  it("never renders more than five candidates", async () => {
    const server = new FixtureServer();
    server.tasks = server.tasks.slice(1, 2); // the TP53 task has exactly five
    const app = mount(server);
    await app.start();
    expect(candidateRows()).toHaveLength(5);
  });

  it("disables submit until a selection is made", async () => {
    const app = mount(new FixtureServer());
    await app.start();
    expect(submitButton().disabled).toBe(true);
    candidateRows()[0].click();
    expect(submitButton().disabled).toBe(false);
  });

  it("choose merges, toasts the target mcid, and advances the queue", async () => {
    const server = new FixtureServer();
    const app = mount(server);
    await app.start();

    candidateRows()[0].click();
    await app.submit();

    expect(root.querySelector(".toast")?.textContent).toBe("merged into MC00000012");
    expect(server.resolved.get("PR000001")).toBe("MC00000012");
    expect(root.querySelector(".source-head")?.textContent).toBe("HGNC 11998");
    expect(root.textContent).toContain("2 open task(s)");
  });

  it("reject-all toasts the newly minted concept", async () => {
    const server = new FixtureServer();
    const app = mount(server);
    await app.start();

    root.querySelector<HTMLElement>(".reject-all")!.click();
    await app.submit();

    expect(root.querySelector(".toast")?.textContent).toMatch(/^new concept MC\d{8}$/);
    expect(server.tasks.map((t) => t.pending_id)).toEqual(["PR000002", "PR000003"]);
  });

  it("a 409 (someone else resolved it) refreshes silently", async () => {
    const server = new FixtureServer();
    const app = mount(server);
    await app.start();
    candidateRows()[0].click();

    // another reviewer beats us to it
    server.tasks = server.tasks.slice(1);
    server.resolved.set("PR000001", "MC00000044");

    await app.submit();

    expect(root.querySelector(".error-banner")).toBeNull();
    expect(root.querySelector(".source-head")?.textContent).toBe("HGNC 11998");
  });

  it("supports keyboard selection and submit", async () => {
    const server = new FixtureServer();
    const app = mount(server);
    await app.start();

    root.dispatchEvent(new KeyboardEvent("keydown", { key: "2" }));
    expect(candidateRows()[1].classList.contains("selected")).toBe(true);

    root.dispatchEvent(new KeyboardEvent("keydown", { key: "r" }));
    expect(root.querySelector(".reject-all")!.classList.contains("selected")).toBe(true);

    root.dispatchEvent(new KeyboardEvent("keydown", { key: "Enter" }));
    await Promise.resolve(); // let submit's fetch settle
    await Promise.resolve();
    await new Promise((r) => setTimeout(r, 0));
    expect(server.resolved.has("PR000001")).toBe(true);
  });

  it("shows the drained message once the queue is empty", async () => {
    const server = new FixtureServer();
    server.tasks = [];
    const app = mount(server);
    await app.start();
    expect(root.querySelector(".queue-drained")?.textContent).toContain("queue drained");
  });

  it("shows an error banner when the queue fetch fails, and retry recovers", async () => {
    const server = new FixtureServer();
    let broken = true;
    const flaky: typeof fetch = (input, init) => {
      if (broken) return Promise.reject(new Error("connection refused"));
      return server.fetch(input, init);
    };
    const app = new App(root, new ReviewClient(flaky, "http://fixture"));
    await app.start();

    expect(root.querySelector(".error-banner")?.textContent).toContain(
      "queue fetch failed",
    );

    broken = false;
    await app.refresh();
    expect(root.querySelector(".error-banner")).toBeNull();
    expect(root.querySelector(".source-head")?.textContent).toBe("MSH D000544");
  });
});
