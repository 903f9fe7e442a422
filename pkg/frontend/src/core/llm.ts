/**
 * Remote few-shot translation from the browser: the same prompt, payload
 * shape, and extraction rule as the native client. All network traffic
 * goes through the injected transport so offline modes can prove they
 * never touch it.
 */

export const FEW_SHOT_PROMPT =
  "You are an expert system that translates user queries into geospatial " +
  "function calls. Here are some examples:\n" +
  "User: I'd like to zoom out by 2 levels\n" +
  "Function Call: ZoomOut(2)\n" +
  "User: Show the seismic activity map from WMS URL https://example.activity/wms\n" +
  "Function Call: AddWMS('https://example.activity/wms')\n" +
  "User: Load the point vector using point_zones_NY_kpn.kml!\n" +
  "Function Call: AddVector('point', 'point_zones_NY_kpn.kml')\n" +
  "User: Add marker 'University' at location -73.1888, 122.889!\n" +
  "Function Call: AddMarker('University', [-73.1888, 122.889])\n" +
  "User: Set map bounds from 62.2585, -120.3652 to 63.8833, -3.3906.\n" +
  "Function Call: MoveToExtent(62.2585, -120.3652, 63.8833, -3.3906)\n" +
  "User: Switch to the OpenMallMap layer for retail therapy.\n" +
  "Function Call: AddLayer('OpenMallMap')\n" +
  "User: Can we go to 40.5267, -79.4892?\n" +
  "Function Call: Move(40.5267, -79.4892)\n" +
  "User: Draw a Line on the map!\n" +
  "Function Call: Draw('Line')\n" +
  "User: Set the background color to ivory.\n" +
  "Function Call: Cartography('background', 'ivory', null)\n" +
  "User: Zoom in by 7 levels to focus on the details.\n" +
  "Function Call: ZoomIn(7)\n" +
  "User: {user_query}\n" +
  "Function Call:";

export function buildPrompt(query: string): string {
  return FEW_SHOT_PROMPT.replace("{user_query}", query);
}

const PREFIX = "Function Call:";

export function extractCall(rawText: string): string {
  let line = rawText.split("\n", 1)[0].trim();
  if (line.startsWith(PREFIX)) {
    line = line.slice(PREFIX.length);
  }
  return line.trim();
}

export interface RemoteConfig {
  endpointUrl: string;
  modelName: string;
  apiKey: string;
  temperature?: number;
  maxTokens?: number;
}

export type FetchLike = (url: string, init: RequestInit) => Promise<Response>;

export function completionText(envelope: any): string {
  if (typeof envelope?.text === "string") return envelope.text;
  const choice = envelope?.choices?.[0];
  if (typeof choice?.message?.content === "string") return choice.message.content;
  if (typeof choice?.text === "string") return choice.text;
  const content = envelope?.message?.content;
  if (typeof content === "string") return content;
  if (Array.isArray(content)) {
    const texts = content.map((b: any) => b?.text).filter((t: any) => typeof t === "string");
    if (texts.length) return texts.join("");
  }
  if (typeof envelope?.generations?.[0]?.text === "string") return envelope.generations[0].text;
  if (typeof envelope?.content === "string") return envelope.content;
  throw new Error("unrecognized response envelope");
}

export async function translateRemote(
  config: RemoteConfig,
  query: string,
  fetchFn: FetchLike,
): Promise<string> {
  const response = await fetchFn(config.endpointUrl, {
    method: "POST",
    headers: {
      "Content-Type": "application/json",
      Authorization: `Bearer ${config.apiKey}`,
    },
    body: JSON.stringify({
      model: config.modelName,
      messages: [{ role: "user", content: buildPrompt(query) }],
      temperature: config.temperature ?? 0.0,
      max_tokens: config.maxTokens ?? 64,
    }),
  });
  if (response.status === 401 || response.status === 403) {
    throw new Error(`authentication failed (HTTP ${response.status})`);
  }
  if (!response.ok) {
    throw new Error(`endpoint error (HTTP ${response.status})`);
  }
  const raw = completionText(await response.json());
  if (!raw.trim()) {
    throw new Error("endpoint returned no text");
  }
  return extractCall(raw);
}
