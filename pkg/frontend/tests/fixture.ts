import type { Candidate, ReviewTask } from "../src/types.js";

/**
 * In-memory stand-in for the review service. Mirrors its queue semantics:
 * decisions resolve tasks, a second decision on the same task is a 409, and
 * reject-all mints a new concept id.
 */
export class FixtureServer {
  tasks: ReviewTask[];
  resolved = new Map<string, string>(); // pending_id -> mcid
  private nextSerial = 9000;

  constructor(tasks?: ReviewTask[]) {
    this.tasks = tasks ?? defaultTasks();
  }

  get fetch(): typeof fetch {
    return (input, init) => this.handle(String(input), init);
  }

  private async handle(url: string, init?: RequestInit): Promise<Response> {
    const parsed = new URL(url, "http://fixture");
    if (parsed.pathname === "/api/pending" && (init?.method ?? "GET") === "GET") {
      const limit = Number(parsed.searchParams.get("limit") ?? 20);
      const offset = Number(parsed.searchParams.get("offset") ?? 0);
      return json(200, {
        total_open: this.tasks.length,
        limit,
        offset,
        tasks: this.tasks.slice(offset, offset + limit),
      });
    }

    const decision = parsed.pathname.match(/^\/api\/pending\/([^/]+)\/decision$/);
    if (decision && init?.method === "POST") {
      const pendingId = decision[1];
      const body = JSON.parse(String(init.body));
      if (this.resolved.has(pendingId)) {
        return json(409, { error: `${pendingId} is already resolved` });
      }
      const task = this.tasks.find((t) => t.pending_id === pendingId);
      if (!task) return json(404, { error: `unknown pending id ${pendingId}` });

      let mcid: string;
      let outcome: string;
      if (body.action === "choose") {
        if (!task.candidates.some((c) => c.mcid === body.mcid)) {
          return json(422, { error: `${body.mcid} was not offered` });
        }
        mcid = body.mcid;
        outcome = "merged_into";
      } else if (body.action === "reject_all") {
        mcid = `MC${String(this.nextSerial++).padStart(8, "0")}`;
        outcome = "new_concept";
      } else {
        return json(422, { error: `unknown action ${body.action}` });
      }
      this.tasks = this.tasks.filter((t) => t.pending_id !== pendingId);
      this.resolved.set(pendingId, mcid);
      return json(200, {
        pending_id: pendingId,
        outcome,
        mcid,
        added_maids: [],
        duplicates: 0,
      });
    }

    if (parsed.pathname === "/api/stats") {
      return json(200, {
        open: this.tasks.length,
        resolved: this.resolved.size,
        decisions_by_reviewer: {},
        coverage: [],
        untyped: 0,
      });
    }

    return json(404, { error: `no route for ${parsed.pathname}` });
  }
}

function json(status: number, body: unknown): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}

function candidate(mcid: string, preferred: string, score: number, types: string[] = []): Candidate {
  return { mcid, preferred_term: preferred, score, top_types: types };
}

export function defaultTasks(): ReviewTask[] {
  return [
    {
      pending_id: "PR000001",
      source_concept: {
        source_abbr: "MSH",
        code_in_source: "D000544",
        terms: [
          { term_string: "Alzheimer Disease", tty: "PT" },
          { term_string: "Alzheimer Dementia", tty: "SY" },
        ],
      },
      candidates: [
        candidate("MC00000012", "Alzheimer's disease", 0.91, ["Disease"]),
        candidate("MC00000044", "Alzheimer type dementia", 0.74, ["Disease"]),
        candidate("MC00000103", "Dementia", 0.62),
      ],
      created_at: "2026-08-20T10:00:00Z",
    },
    {
      pending_id: "PR000002",
      source_concept: {
        source_abbr: "HGNC",
        code_in_source: "11998",
        terms: [{ term_string: "TP53", tty: "SYM" }],
      },
      candidates: [
        candidate("MC00000201", "tumor protein p53", 0.88, ["Gene"]),
        candidate("MC00000202", "TP53 gene product", 0.81, ["Gene Product"]),
        candidate("MC00000203", "TP63", 0.7, ["Gene"]),
        candidate("MC00000204", "TP73", 0.68, ["Gene"]),
        candidate("MC00000205", "p53 pathway", 0.61, ["Biochemical Pathway"]),
      ],
      created_at: "2026-08-20T10:05:00Z",
    },
    {
      pending_id: "PR000003",
      source_concept: {
        source_abbr: "DRUGBANK",
        code_in_source: "DB00945",
        terms: [{ term_string: "acetylsalicylic acid", tty: "PT" }],
      },
      candidates: [candidate("MC00000310", "aspirin", 0.64, ["Chemical and Drug"])],
      created_at: "2026-08-20T10:10:00Z",
    },
  ];
}
