/** Wire types mirroring the server's JSON documents. */

export interface FieldSummary {
  name: string;
  mult: string;
  target: string;
}

export interface SigSummary {
  name: string;
  abstract: boolean;
  one: boolean;
  parent: string | null;
  fields: FieldSummary[];
}

export interface CommandSummary {
  name: string;
  scope: number;
}

export interface ModelSummary {
  modelId: string;
  sigs: SigSummary[];
  commands: CommandSummary[];
}

export interface ScenarioDoc {
  size: number;
  ordinal: number;
  phase: string | null;
  sigs: Record<string, string[]>;
  fields: Record<string, [string, string][]>;
}

export interface SessionResource {
  id: string;
  modelId: string;
  command: string;
  size: number | null;
  mode: string;
  state: 'running' | 'exhausted';
  counts: Record<string, number>;
  scenarios: number;
  createdAt: number;
}

export interface ExhaustedReply {
  status: 'exhausted';
  counts?: Record<string, number>;
}

export type NextReply = ScenarioDoc | ExhaustedReply;

export function isExhausted(reply: NextReply): reply is ExhaustedReply {
  return (reply as ExhaustedReply).status === 'exhausted';
}

export interface ModelDiagnostic {
  message: string;
  line: number;
  col: number;
}
