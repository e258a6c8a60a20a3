#!/usr/bin/env node
import { resolve } from "node:path";
import { fileURLToPath } from "node:url";
import yargs from "yargs";
import { hideBin } from "yargs/helpers";
import { captureCandidates } from "./capture.js";
import { writeLog } from "./logwriter.js";
import { buildCumulativeManifest, readManifestFile } from "./manifest.js";
import { defaultConfig } from "./types.js";

export async function main(argv: string[]): Promise<number> {
  const args = await yargs(argv)
    .scriptName("toksat-extractor")
    .usage("$0 --manifest FILE --out FILE [options]")
    .option("manifest", {
      type: "string",
      demandOption: true,
      describe: "TSV audio manifest: path<TAB>utt_id<TAB>duration_s",
    })
    .option("out", {
      type: "string",
      demandOption: true,
      describe: "output JSON Lines log path",
    })
    .option("k", { type: "number", default: 50, describe: "candidates per decoding step" })
    .option("language", { type: "string", default: "xx", describe: "language code for emitted records" })
    .option("model", { type: "string", default: "signal-v1", describe: "decoder backend identifier" })
    .option("beam-size", { type: "number", default: 5, describe: "beam width (recorded in config)" })
    .option("temperature", { type: "number", default: 0.2, describe: "decoding temperature (recorded in config)" })
    .option("max-minutes", {
      type: "number",
      describe: "process only the dataset-order prefix covering this many minutes",
    })
    .strict()
    .fail((msg, err) => {
      throw err ?? new Error(msg);
    })
    .parse();

  const config = defaultConfig({
    model: args.model,
    language: args.language,
    k: args.k,
    beamSize: args["beam-size"],
    temperature: args.temperature,
  });

  let manifest = readManifestFile(args.manifest);
  if (args["max-minutes"] !== undefined) {
    manifest = buildCumulativeManifest(manifest, { stepMinutes: 10, maxMinutes: args["max-minutes"] });
  }

  const result = captureCandidates(manifest, config);
  writeLog(result.records, args.out);
  console.log(
    `${args.out}: ${result.records.length} records, ` +
      `${result.emittedDurationS.toFixed(1)} s audio, ${result.skipped.length} skipped`,
  );
  return 0;
}

if (process.argv[1] && fileURLToPath(import.meta.url) === resolve(process.argv[1])) {
  main(hideBin(process.argv))
    .then((code) => process.exit(code))
    .catch((err) => {
      console.error((err as Error).message);
      process.exit(1);
    });
}
