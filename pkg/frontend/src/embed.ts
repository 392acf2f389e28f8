// Chart embedding seam: the emitted Vega-Lite document goes to vega-embed
// verbatim. The library arrives via the classic UMD script tags in
// index.html (vega, vega-lite, vega-embed), so built modules stay loadable
// straight from a static file server with no bundler. Tests stub this
// module (vega's renderer needs a real browser).

export interface EmbeddedChart {
  finalize(): void;
}

type EmbedFn = (
  element: HTMLElement,
  spec: unknown,
  options?: Record<string, unknown>,
) => Promise<{ finalize(): void }>;

export async function embedChart(
  element: HTMLElement,
  document: Record<string, unknown>,
): Promise<EmbeddedChart> {
  const embed = (globalThis as { vegaEmbed?: EmbedFn }).vegaEmbed;
  if (embed === undefined) {
    element.textContent = "[chart renderer not loaded]";
    return { finalize: () => {} };
  }
  const result = await embed(element, document, { actions: false });
  return { finalize: () => result.finalize() };
}
