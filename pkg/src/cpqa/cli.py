"""Single entry point wiring manifests, condensation, generation and evaluation.

Every file-producing run also writes a run manifest (inputs with checksums,
config checksum, template checksums, provider identity, timings) so the run
can be reproduced; with the scripted provider, outputs are byte-identical
across runs.

Exit codes: 0 success, 2 configuration error, 3 I/O error, 4 provider
exhaustion, 1 any other fatal error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from dataclasses import dataclass, field, replace
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Sequence

import yaml

from .alignment import align_words
from .condense import CondenseConfig, condense_corpus
from .corpus import (
    QA_TYPES,
    load_clip_manifest,
    load_qa_manifest,
    write_clip_manifest,
    write_qa_manifest,
    write_quarantine_manifest,
)
from .extract import ValidationRuleSet, parse_qa_pairs, validate_qa
from .gateway import (
    CharBigramEmbedding,
    ChatRequest,
    HttpChatProvider,
    HttpEmbeddingProvider,
    ScriptedChatProvider,
    batch_generate,
)
from .metrics import (
    LabelSet,
    evaluate_records,
    judge_correlation,
    load_eval_records,
    weighted_accuracy,
    weighted_f1,
    write_eval_records,
)
from .prompts import GenerationMode, build_qa_generation_prompt, template_checksums


class CliError(Exception):
    """Fatal command failure with a process exit code."""

    exit_code = 1


class ConfigError(CliError):
    exit_code = 2


class InputOutputError(CliError):
    exit_code = 3


class ProviderExhaustedError(CliError):
    exit_code = 4


def _sha256_file(path: str | Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            digest.update(chunk)
    return digest.hexdigest()


def _load_yaml(path: str | Path) -> dict[str, Any]:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = yaml.safe_load(fh)
    except OSError as exc:
        raise InputOutputError(f"cannot read config {path}: {exc}") from exc
    except yaml.YAMLError as exc:
        raise ConfigError(f"cannot parse config {path}: {exc}") from exc
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ConfigError(f"config {path} must be a mapping at top level")
    return data


def _write_json(path: str | Path, data: Any) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(data, fh, ensure_ascii=False, indent=2)
        fh.write("\n")


@dataclass
class RunRecorder:
    """Collects reproducibility metadata for one subcommand invocation."""

    command: str
    argv: list[str]
    inputs: dict[str, str] = field(default_factory=dict)
    outputs: list[str] = field(default_factory=list)
    config_checksum: str | None = None
    template_checksums: dict[str, str] | None = None
    provider: str | None = None
    started_at: str = ""
    _t0: float = 0.0

    def __post_init__(self) -> None:
        self.started_at = datetime.now(timezone.utc).isoformat()
        self._t0 = time.monotonic()

    def record_input(self, path: str | Path) -> None:
        self.inputs[str(path)] = _sha256_file(path)

    def record_output(self, path: str | Path) -> None:
        self.outputs.append(str(path))

    def write(self, path: str | Path) -> None:
        data = {
            "command": self.command,
            "argv": self.argv,
            "inputs": self.inputs,
            "outputs": self.outputs,
            "config_checksum": self.config_checksum,
            "template_checksums": self.template_checksums,
            "provider": self.provider,
            "started_at": self.started_at,
            "finished_at": datetime.now(timezone.utc).isoformat(),
            "duration_seconds": round(time.monotonic() - self._t0, 6),
        }
        _write_json(path, data)


def _run_manifest_path(args: argparse.Namespace, primary_output: str | None) -> Path | None:
    if getattr(args, "run_manifest", None):
        return Path(args.run_manifest)
    if primary_output:
        return Path(str(primary_output) + ".run.json")
    return None


def _open_clips(path: str, recorder: RunRecorder):
    try:
        clips, diagnostics = load_clip_manifest(path)
    except OSError as exc:
        raise InputOutputError(f"cannot read clip manifest {path}: {exc}") from exc
    recorder.record_input(path)
    for diag in diagnostics:
        print(f"{path}:{diag.line_no}: skipped: {diag.reason}", file=sys.stderr)
    return clips, diagnostics


def _build_chat_provider(cfg: dict[str, Any]):
    kind = cfg.get("kind", "scripted")
    if kind == "scripted":
        script = cfg.get("script")
        if not script:
            raise ConfigError("provider config missing key 'script' for the scripted provider")
        try:
            return ScriptedChatProvider.from_file(script)
        except OSError as exc:
            raise InputOutputError(f"cannot read scripted responses {script}: {exc}") from exc
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
    if kind == "http":
        for key in ("endpoint", "model"):
            if key not in cfg:
                raise ConfigError(f"provider config missing key {key!r} for the http provider")
        return HttpChatProvider(
            endpoint=cfg["endpoint"],
            model=cfg["model"],
            api_key_env=cfg.get("api_key_env", "CPQA_API_KEY"),
            auth_header=cfg.get("auth_header", "Authorization"),
            auth_scheme=cfg.get("auth_scheme", "Bearer"),
            timeout=float(cfg.get("timeout", 60.0)),
        )
    raise ConfigError(f"unknown chat provider kind {kind!r}")


def _build_embedding_provider(cfg: dict[str, Any]):
    kind = cfg.get("kind", "bigram")
    if kind == "bigram":
        return CharBigramEmbedding()
    if kind == "http":
        for key in ("endpoint", "model", "dimension"):
            if key not in cfg:
                raise ConfigError(f"embedding config missing key {key!r} for the http provider")
        return HttpEmbeddingProvider(
            endpoint=cfg["endpoint"],
            model=cfg["model"],
            dimension=int(cfg["dimension"]),
            api_key_env=cfg.get("api_key_env", "CPQA_API_KEY"),
            auth_header=cfg.get("auth_header", "Authorization"),
            auth_scheme=cfg.get("auth_scheme", "Bearer"),
            timeout=float(cfg.get("timeout", 60.0)),
        )
    if kind == "sentence-transformer":
        from .gateway import SentenceTransformerEmbedding

        return SentenceTransformerEmbedding(model_name=cfg.get("model", "paraphrase-MiniLM-L6-v2"))
    raise ConfigError(f"unknown embedding provider kind {kind!r}")


def _build_rules(cfg: dict[str, Any]) -> ValidationRuleSet:
    kwargs: dict[str, Any] = {}
    if "forbidden_terms" in cfg:
        kwargs["forbidden_terms"] = tuple(cfg["forbidden_terms"])
    if "min_answer_words" in cfg:
        kwargs["min_answer_words"] = int(cfg["min_answer_words"])
    if "forbidden_name_fragments" in cfg:
        kwargs["forbidden_name_fragments"] = tuple(cfg["forbidden_name_fragments"])
    try:
        return ValidationRuleSet(**kwargs)
    except ValueError as exc:
        raise ConfigError(f"invalid validation rules: {exc}") from exc


# --- subcommands -----------------------------------------------------------


def cmd_ingest(args: argparse.Namespace, argv: list[str]) -> int:
    recorder = RunRecorder("ingest", argv)
    clips, diagnostics = _open_clips(args.in_path, recorder)
    try:
        write_clip_manifest(clips, args.out)
    except OSError as exc:
        raise InputOutputError(f"cannot write {args.out}: {exc}") from exc
    recorder.record_output(args.out)
    if args.report:
        _write_json(
            args.report,
            {
                "input": args.in_path,
                "valid_records": len(clips),
                "diagnostics": [{"line": d.line_no, "reason": d.reason} for d in diagnostics],
            },
        )
        recorder.record_output(args.report)
    manifest_path = _run_manifest_path(args, args.out)
    if manifest_path:
        recorder.write(manifest_path)
    print(f"ingest: {len(clips)} valid records, {len(diagnostics)} rejected lines -> {args.out}")
    return 0


def cmd_condense(args: argparse.Namespace, argv: list[str]) -> int:
    recorder = RunRecorder("condense", argv)
    config_data = _load_yaml(args.config)
    recorder.config_checksum = _sha256_file(args.config)
    try:
        cfg = CondenseConfig.from_dict(config_data)
    except (ValueError, TypeError, KeyError, AttributeError) as exc:
        raise ConfigError(f"invalid condense config {args.config}: {exc}") from exc
    clips, _ = _open_clips(args.in_path, recorder)
    selected, report = condense_corpus(clips, cfg)
    try:
        write_clip_manifest(selected, args.out)
    except OSError as exc:
        raise InputOutputError(f"cannot write {args.out}: {exc}") from exc
    recorder.record_output(args.out)
    _write_json(args.report, report.to_dict())
    recorder.record_output(args.report)
    manifest_path = _run_manifest_path(args, args.out)
    if manifest_path:
        recorder.write(manifest_path)
    print(
        f"condense: kept {len(report.kept)} of {report.input_count} clips "
        f"({len(report.rejected)} rejected) -> {args.out}"
    )
    return 0


def cmd_genqa(args: argparse.Namespace, argv: list[str]) -> int:
    recorder = RunRecorder("genqa", argv)
    config_data = _load_yaml(args.config)
    recorder.config_checksum = _sha256_file(args.config)
    recorder.template_checksums = template_checksums()
    provider = _build_chat_provider(config_data.get("provider", {}))
    recorder.provider = provider.identity
    rules = _build_rules(config_data.get("rules", {}))
    parallelism = int(config_data.get("parallelism", args.parallelism))
    retry_budget = int(config_data.get("retry_budget", 0))
    if parallelism < 1:
        raise ConfigError(f"parallelism must be >= 1, got {parallelism}")
    mode = GenerationMode(args.mode)

    clips, _ = _open_clips(args.clips, recorder)
    requests = []
    for clip in clips:
        aligned = align_words(clip.words, clip.windows)
        try:
            prompt = build_qa_generation_prompt(clip, aligned, mode)
        except ValueError as exc:
            raise CliError(f"cannot build prompt for clip {clip.clip_id!r}: {exc}") from exc
        requests.append(
            ChatRequest(
                prompt=prompt,
                request_id=clip.clip_id,
                temperature=float(config_data.get("temperature", 0.0)),
                max_output_tokens=int(config_data.get("max_output_tokens", 1024)),
            )
        )
    outcomes = batch_generate(provider, requests, parallelism=parallelism, retry_budget=retry_budget)

    accepted = []
    quarantined = []
    failed_ids = []
    parsed_count = 0
    parse_diagnostic_count = 0
    rejected_by_reason: dict[str, int] = {}
    for clip in clips:
        outcome = outcomes[clip.clip_id]
        if not outcome.ok:
            failed_ids.append(clip.clip_id)
            print(f"genqa: request {clip.clip_id} failed: {outcome.error}", file=sys.stderr)
            continue
        pairs, diags = parse_qa_pairs(outcome.text, clip.clip_id)
        parsed_count += len(pairs)
        parse_diagnostic_count += len(diags)
        for pair in pairs:
            reasons = validate_qa(pair, rules)
            if reasons:
                quarantined.append((pair, reasons))
                for reason in reasons:
                    rejected_by_reason[reason] = rejected_by_reason.get(reason, 0) + 1
            else:
                accepted.append(pair)

    try:
        write_qa_manifest(accepted, args.out)
        write_quarantine_manifest(quarantined, args.quarantine)
    except OSError as exc:
        raise InputOutputError(f"cannot write QA manifests: {exc}") from exc
    recorder.record_output(args.out)
    recorder.record_output(args.quarantine)

    yield_report = {
        "clips": len(clips),
        "requests": len(requests),
        "responses_ok": len(requests) - len(failed_ids),
        "responses_failed": len(failed_ids),
        "failed_request_ids": failed_ids,
        "pairs_parsed": parsed_count,
        "parse_diagnostics": parse_diagnostic_count,
        "accepted": len(accepted),
        "quarantined": len(quarantined),
        "rejected_by_reason": dict(sorted(rejected_by_reason.items())),
    }
    if args.yield_report:
        _write_json(args.yield_report, yield_report)
        recorder.record_output(args.yield_report)
    manifest_path = _run_manifest_path(args, args.out)
    if manifest_path:
        recorder.write(manifest_path)
    print(
        f"genqa: {parsed_count} pairs parsed from {yield_report['responses_ok']} responses; "
        f"{len(accepted)} accepted, {len(quarantined)} quarantined"
    )
    if failed_ids:
        raise ProviderExhaustedError(
            f"{len(failed_ids)} of {len(requests)} requests failed: {', '.join(failed_ids)}"
        )
    return 0


def cmd_augment(args: argparse.Namespace, argv: list[str]) -> int:
    from .prompts import augment_question_with_metadata

    recorder = RunRecorder("augment", argv)
    recorder.template_checksums = template_checksums()
    try:
        pairs, qa_diags = load_qa_manifest(args.in_path)
    except OSError as exc:
        raise InputOutputError(f"cannot read QA manifest {args.in_path}: {exc}") from exc
    recorder.record_input(args.in_path)
    for diag in qa_diags:
        print(f"{args.in_path}:{diag.line_no}: skipped: {diag.reason}", file=sys.stderr)
    clips, _ = _open_clips(args.clips, recorder)
    clip_index = {clip.clip_id: clip for clip in clips}
    augmented = []
    for pair in pairs:
        clip = clip_index.get(pair.clip_id)
        if clip is None:
            raise CliError(f"QA pair references unknown clip {pair.clip_id!r}")
        augmented.append(
            replace(pair, question=augment_question_with_metadata(pair.question, clip.windows))
        )
    try:
        write_qa_manifest(augmented, args.out)
    except OSError as exc:
        raise InputOutputError(f"cannot write {args.out}: {exc}") from exc
    recorder.record_output(args.out)
    manifest_path = _run_manifest_path(args, args.out)
    if manifest_path:
        recorder.write(manifest_path)
    print(f"augment: rewrote {len(augmented)} questions -> {args.out}")
    return 0


def cmd_evaluate(args: argparse.Namespace, argv: list[str]) -> int:
    recorder = RunRecorder("evaluate", argv)
    label_config = _load_yaml(args.labels)
    recorder.config_checksum = _sha256_file(args.labels)
    if "labels" not in label_config:
        raise ConfigError(f"label config {args.labels} is missing key 'labels'")
    try:
        labels = LabelSet(tuple(label_config["labels"]))
    except ValueError as exc:
        raise ConfigError(f"invalid label set in {args.labels}: {exc}") from exc
    embedder = _build_embedding_provider(label_config.get("embedding", {}))
    recorder.provider = embedder.identity

    try:
        records, diagnostics = load_eval_records(args.answers)
    except OSError as exc:
        raise InputOutputError(f"cannot read answers manifest {args.answers}: {exc}") from exc
    recorder.record_input(args.answers)
    for diag in diagnostics:
        print(f"{args.answers}:{diag.line_no}: skipped: {diag.reason}", file=sys.stderr)
    if not records:
        raise CliError(f"answers manifest {args.answers} contains no usable records")

    try:
        enriched = evaluate_records(records, labels, embedder.embed)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc

    report = {
        "record_count": len(enriched),
        "weighted_accuracy": weighted_accuracy(enriched),
        "weighted_f1": weighted_f1(enriched),
        "labels": list(labels.labels),
        "embedding_provider": embedder.identity,
    }
    _write_json(args.metrics, report)
    recorder.record_output(args.metrics)
    if args.answers_out:
        write_eval_records(enriched, args.answers_out)
        recorder.record_output(args.answers_out)
    manifest_path = _run_manifest_path(args, args.metrics)
    if manifest_path:
        recorder.write(manifest_path)
    print(
        f"evaluate: {len(enriched)} records, weighted accuracy "
        f"{report['weighted_accuracy']:.4f}, weighted F1 {report['weighted_f1']:.4f}"
    )
    return 0


def cmd_correlate(args: argparse.Namespace, argv: list[str]) -> int:
    recorder = RunRecorder("correlate", argv)
    try:
        records, diagnostics = load_eval_records(args.answers)
    except OSError as exc:
        raise InputOutputError(f"cannot read answers manifest {args.answers}: {exc}") from exc
    recorder.record_input(args.answers)
    for diag in diagnostics:
        print(f"{args.answers}:{diag.line_no}: skipped: {diag.reason}", file=sys.stderr)
    report = judge_correlation(records)
    binned = sum(b.count for b in report.bins.values())
    data = report.to_dict()
    data["record_count"] = binned
    _write_json(args.report, data)
    recorder.record_output(args.report)
    manifest_path = _run_manifest_path(args, args.report)
    if manifest_path:
        recorder.write(manifest_path)
    mean = report.mean_rescaled_score
    print(
        f"correlate: {binned} scored records, mean rescaled score "
        f"{'n/a' if mean is None else f'{mean:.2f}'} -> {args.report}"
    )
    return 0


def cmd_stats(args: argparse.Namespace, argv: list[str]) -> int:
    recorder = RunRecorder("stats", argv)
    try:
        pairs, diagnostics = load_qa_manifest(args.in_path)
    except OSError as exc:
        raise InputOutputError(f"cannot read QA manifest {args.in_path}: {exc}") from exc
    recorder.record_input(args.in_path)
    for diag in diagnostics:
        print(f"{args.in_path}:{diag.line_no}: skipped: {diag.reason}", file=sys.stderr)
    counts = {qtype: 0 for qtype in sorted(QA_TYPES)}
    for pair in pairs:
        counts[pair.qtype] += 1
    print(f"stats: {len(pairs)} QA pairs in {args.in_path}")
    for qtype in sorted(counts):
        print(f"  {qtype}: {counts[qtype]}")
    if args.out:
        _write_json(args.out, {"total": len(pairs), "by_qtype": counts})
        recorder.record_output(args.out)
        manifest_path = _run_manifest_path(args, args.out)
        if manifest_path:
            recorder.write(manifest_path)
    return 0


# --- parser ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cpqa",
        description="Dataset factory and evaluation harness for contextual-paralinguistic QA.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("ingest", help="validate a clip manifest and write the clean records")
    p.add_argument("--in", dest="in_path", required=True, help="input clip manifest (JSONL)")
    p.add_argument("--out", required=True, help="output manifest of valid records")
    p.add_argument("--report", help="JSON report of per-line diagnostics")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("condense", help="select emotion-rich clips")
    p.add_argument("--config", required=True, help="condensation config (YAML)")
    p.add_argument("--in", dest="in_path", required=True, help="input clip manifest")
    p.add_argument("--out", required=True, help="output manifest of selected clips")
    p.add_argument("--report", required=True, help="JSON selection report")
    p.set_defaults(func=cmd_condense)

    p = sub.add_parser("genqa", help="generate QA pairs for each clip via an LLM provider")
    p.add_argument("--config", required=True, help="pipeline config (YAML): provider, rules, parallelism")
    p.add_argument("--clips", required=True, help="input clip manifest")
    p.add_argument("--mode", choices=[m.value for m in GenerationMode], default="cpqa")
    p.add_argument("--out", required=True, help="accepted QA manifest")
    p.add_argument("--quarantine", required=True, help="rejected QA manifest (with reasons)")
    p.add_argument("--yield-report", help="JSON yield report")
    p.add_argument("--parallelism", type=int, default=4, help="fallback when config omits it")
    p.set_defaults(func=cmd_genqa)

    p = sub.add_parser("augment", help="append emotion-metadata instructions to QA questions")
    p.add_argument("--in", dest="in_path", required=True, help="input QA manifest")
    p.add_argument("--clips", required=True, help="clip manifest supplying emotion windows")
    p.add_argument("--out", required=True, help="output QA manifest")
    p.set_defaults(func=cmd_augment)

    p = sub.add_parser("evaluate", help="estimate labels from answers and compute metrics")
    p.add_argument("--answers", required=True, help="answers manifest (JSONL)")
    p.add_argument("--labels", required=True, help="label config (YAML): labels list, embedding provider")
    p.add_argument("--metrics", required=True, help="output metrics JSON")
    p.add_argument("--answers-out", help="write records enriched with estimated labels")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("correlate", help="bin judge scores against estimated-label correctness")
    p.add_argument("--answers", required=True, help="answers manifest with judge scores and labels")
    p.add_argument("--report", required=True, help="output correlation report JSON")
    p.set_defaults(func=cmd_correlate)

    p = sub.add_parser("stats", help="per-qtype counts for a QA manifest")
    p.add_argument("--in", dest="in_path", required=True, help="QA manifest")
    p.add_argument("--out", help="optional JSON output")
    p.set_defaults(func=cmd_stats)

    for sp in sub.choices.values():
        sp.add_argument("--run-manifest", help="override the run-manifest path")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, argv)
    except CliError as exc:
        print(f"cpqa {args.subcommand}: error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"cpqa {args.subcommand}: I/O error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
