import { describe, expect, it } from "vitest";
import { ApiError, ReviewClient } from "../src/api.js";
import { FixtureServer } from "./fixture.js";

function client(server: FixtureServer): ReviewClient {
  return new ReviewClient(server.fetch, "http://fixture");
}

describe("ReviewClient", () => {
  it("lists pending tasks with paging fields", async () => {
    const server = new FixtureServer();
    const page = await client(server).listPending(2, 1);
    expect(page.total_open).toBe(3);
    expect(page.tasks.map((t) => t.pending_id)).toEqual(["PR000002", "PR000003"]);
  });

  it("submits a choose decision and reports the merge target", async () => {
    const server = new FixtureServer();
    const result = await client(server).submitDecision(
      "PR000001",
      "choose",
      "alice",
      "MC00000012",
    );
    expect(result.outcome).toBe("merged_into");
    expect(result.mcid).toBe("MC00000012");
    expect(server.tasks).toHaveLength(2);
  });

  it("submits reject_all and gets a freshly minted concept id", async () => {
    const server = new FixtureServer();
    const result = await client(server).submitDecision("PR000003", "reject_all", "bob");
    expect(result.outcome).toBe("new_concept");
    expect(result.mcid).toMatch(/^MC\d{8}$/);
  });

  it("surfaces HTTP errors as ApiError with the status code", async () => {
    const server = new FixtureServer();
    const c = client(server);
    await c.submitDecision("PR000001", "reject_all", "alice");
    await expect(
      c.submitDecision("PR000001", "reject_all", "bob"),
    ).rejects.toMatchObject({ status: 409 });
    await expect(c.submitDecision("PR999999", "reject_all", "bob")).rejects.toThrow(
      ApiError,
    );
    await expect(
      c.submitDecision("PR000002", "choose", "bob", "MC99999999"),
    ).rejects.toMatchObject({ status: 422 });
  });
});
