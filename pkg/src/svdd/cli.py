"""Command-line client for the svdd service.

Every subcommand is a thin wrapper over one HTTP endpoint. Without --server
the service app runs in-process over an ASGI transport, so no daemon is
needed for local work; with --server the same requests go to a remote
instance (which is where long-lived encoder weights pay off).
"""

import asyncio
import json
import sys

import click
import httpx


def _call(server: str | None, method: str, path: str, payload: dict | None = None):
    if server:
        with httpx.Client(base_url=server, timeout=None) as client:
            response = client.request(method, path, json=payload)
            return response.status_code, response.json()

    async def go():
        from .service.app import app

        transport = httpx.ASGITransport(app=app)
        async with httpx.AsyncClient(transport=transport, base_url="http://svdd.internal",
                                     timeout=None) as client:
            response = await client.request(method, path, json=payload)
            return response.status_code, response.json()

    return asyncio.run(go())


def _emit(doc) -> None:
    click.echo(json.dumps(doc, indent=2, sort_keys=True))


def _require_ok(status: int, body) -> None:
    if status != 200:
        click.echo(f"error ({status}): {body.get('detail', body)}", err=True)
        sys.exit(1)


def _experiment_payload(config, manifest, cache_dir, out, weights, feature, head,
                        seed, workers) -> dict:
    doc: dict = {}
    if config:
        with open(config, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    if manifest:
        doc["manifest"] = manifest
    if cache_dir:
        doc["cache_dir"] = cache_dir
    if out:
        doc["out_dir"] = out
    if feature:
        doc.setdefault("feature", {})["system"] = feature
    if weights:
        doc.setdefault("feature", {})["weights_path"] = weights
    if head:
        doc["head"] = head
    if seed is not None:
        doc["seed"] = seed
    if workers is not None:
        doc["workers"] = workers
    doc.setdefault("cache_dir", "svdd_cache")
    doc.setdefault("out_dir", "svdd_out")
    if "manifest" not in doc:
        click.echo("error: no manifest given (flag --manifest or config file)", err=True)
        sys.exit(2)
    return doc


def _experiment_options(fn):
    options = [
        click.option("--config", envvar="SVDD_CONFIG", type=click.Path(exists=True),
                     help="experiment config JSON"),
        click.option("--manifest", envvar="SVDD_MANIFEST", help="manifest CSV path"),
        click.option("--cache-dir", envvar="SVDD_CACHE_DIR", help="feature cache directory"),
        click.option("--out", envvar="SVDD_OUT", help="output directory"),
        click.option("--weights", envvar="SVDD_WEIGHTS", help="encoder weights archive"),
        click.option("--feature", envvar="SVDD_FEATURE",
                     help="feature system (w_tiny..w_medium, w_custom, mfcc, lfcc, cqcc, logmel)"),
        click.option("--head", envvar="SVDD_HEAD", type=click.Choice(["cnn", "resnet34"])),
        click.option("--seed", envvar="SVDD_SEED", type=int, default=None),
        click.option("--workers", envvar="SVDD_WORKERS", type=int, default=None),
    ]
    for opt in reversed(options):
        fn = opt(fn)
    return fn


@click.group()
@click.option("--server", envvar="SVDD_SERVER", default=None,
              help="URL of a running service; default runs in-process")
@click.pass_context
def main(ctx, server):
    """Singing-voice deepfake detection toolkit."""
    ctx.obj = server


@main.command()
@_experiment_options
@click.pass_obj
def extract(server, config, manifest, cache_dir, out, weights, feature, head, seed, workers):
    """Compute and cache features for every manifest clip (idempotent)."""
    payload = _experiment_payload(config, manifest, cache_dir, out, weights, feature,
                                  head, seed, workers)
    status, body = _call(server, "POST", "/extract", {"config": payload})
    _require_ok(status, body)
    _emit(body)
    if body["failures"]:
        sys.exit(1)


@main.command()
@_experiment_options
@click.pass_obj
def train(server, config, manifest, cache_dir, out, weights, feature, head, seed, workers):
    """Train a classifier head; keeps the best validation-EER epoch."""
    payload = _experiment_payload(config, manifest, cache_dir, out, weights, feature,
                                  head, seed, workers)
    status, body = _call(server, "POST", "/train", {"config": payload})
    _require_ok(status, body)
    _emit(body)


@main.command("eval")
@_experiment_options
@click.option("--head-path", default=None, help="trained head archive (default: out dir)")
@click.pass_obj
def eval_cmd(server, config, manifest, cache_dir, out, weights, feature, head, seed,
             workers, head_path):
    """Score all partitions and write EER reports."""
    payload = _experiment_payload(config, manifest, cache_dir, out, weights, feature,
                                  head, seed, workers)
    status, body = _call(server, "POST", "/eval",
                         {"config": payload, "head_path": head_path})
    _require_ok(status, body)
    _emit(body)


@main.command()
@click.argument("run_dirs", nargs=-1, required=True)
@click.option("--out", envvar="SVDD_OUT", required=True)
@click.option("--quoted", type=click.Path(exists=True),
              help="JSON file of condition -> published EER percent")
@click.option("--quoted-label", default="quoted")
@click.pass_obj
def report(server, run_dirs, out, quoted, quoted_label):
    """Aggregate run directories into feature-by-partition EER tables."""
    quoted_doc = None
    if quoted:
        with open(quoted, "r", encoding="utf-8") as fh:
            quoted_doc = json.load(fh)
    status, body = _call(server, "POST", "/report",
                         {"run_dirs": list(run_dirs), "out_dir": out,
                          "quoted": quoted_doc, "quoted_label": quoted_label})
    _require_ok(status, body)
    _emit(body)


@main.command()
@click.argument("audio_a", type=click.Path(exists=True))
@click.argument("audio_b", type=click.Path(exists=True))
@click.option("--out", envvar="SVDD_OUT", required=True)
@click.pass_obj
def spectro(server, audio_a, audio_b, out):
    """Dump aligned log-spectrograms of two clips for side-by-side comparison."""
    status, body = _call(server, "POST", "/spectro",
                         {"audio_a": audio_a, "audio_b": audio_b, "out_dir": out})
    _require_ok(status, body)
    _emit(body)


@main.command()
@click.argument("scores_csv", type=click.Path(exists=True))
@click.pass_obj
def eer(server, scores_csv):
    """Compute EER from a clip_id,label,score CSV."""
    import csv

    with open(scores_csv, "r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        trials = [{"clip_id": row["clip_id"], "label": row["label"],
                   "score": float(row["score"])} for row in reader]
    status, body = _call(server, "POST", "/eer", {"trials": trials})
    _require_ok(status, body)
    _emit(body)


@main.command("validate-manifest")
@click.argument("manifest", type=click.Path(exists=True))
@click.option("--check-audio", is_flag=True, default=False)
@click.pass_obj
def validate_manifest(server, manifest, check_audio):
    """Check a manifest against the reference partition counts and singer rules."""
    status, body = _call(server, "POST", "/manifest/validate",
                         {"manifest": manifest, "check_audio": check_audio})
    _require_ok(status, body)
    _emit(body)
    if body["violations"] or body["missing_audio"]:
        sys.exit(1)


@main.command()
@click.option("--out", envvar="SVDD_OUT", required=True)
@click.option("--seed", envvar="SVDD_SEED", type=int, default=0)
@click.option("--separability", type=float, default=1.0)
@click.option("--t04-separability", type=float, default=0.35)
@click.pass_obj
def synthetic(server, out, seed, separability, t04_separability):
    """Generate the desk-scale surrogate corpus plus manifest."""
    status, body = _call(server, "POST", "/synthetic",
                         {"out_dir": out, "seed": seed, "separability": separability,
                          "t04_separability": t04_separability})
    _require_ok(status, body)
    _emit(body)


@main.command()
@click.argument("audio", type=click.Path(exists=True))
@click.option("--out", required=True, help="output .feat path")
@click.option("--system", default="logmel")
@click.option("--weights", default=None)
@click.option("--encoder-dims", default=None,
              help="JSON of {n_blocks,d_model,n_heads,d_ff} for w_custom")
@click.pass_obj
def feature(server, audio, out, system, weights, encoder_dims):
    """Extract one clip's feature matrix to a dump file."""
    spec: dict = {"system": system}
    if weights:
        spec["weights_path"] = weights
    if encoder_dims:
        spec["encoder"] = json.loads(encoder_dims)
    status, body = _call(server, "POST", "/feature/clip",
                         {"audio_path": audio, "out_path": out, "feature": spec})
    _require_ok(status, body)
    _emit(body)


@main.command()
@click.argument("audio", type=click.Path(exists=True))
@click.option("--frame-ms", type=float, default=30.0)
@click.option("--threshold-db", type=float, default=-35.0)
@click.option("--min-speech-s", type=float, default=1.0)
@click.option("--max-clip-s", type=float, default=20.0)
@click.option("--merge-gap-s", type=float, default=0.5)
@click.pass_obj
def vad(server, audio, frame_ms, threshold_db, min_speech_s, max_clip_s, merge_gap_s):
    """Segment a clip into active-voice intervals."""
    status, body = _call(server, "POST", "/vad",
                         {"audio_path": audio, "frame_ms": frame_ms,
                          "energy_threshold_db": threshold_db,
                          "min_speech_s": min_speech_s, "max_clip_s": max_clip_s,
                          "merge_gap_s": merge_gap_s})
    _require_ok(status, body)
    _emit(body)


@main.command()
@click.pass_obj
def selftest(server):
    """Run the built-in oracle suite and print one line per check."""
    status, body = _call(server, "POST", "/selftest")
    _require_ok(status, body)
    width = max(len(c["name"]) for c in body["checks"])
    for c in body["checks"]:
        mark = "PASS" if c["passed"] else "FAIL"
        click.echo(f"{c['name']:<{width}}  {mark}  {c['detail']}")
    if not body["passed"]:
        sys.exit(1)


@main.command()
@click.option("--host", default="127.0.0.1")
@click.option("--port", type=int, default=8787)
def serve(host, port):
    """Run the service with uvicorn."""
    import uvicorn

    uvicorn.run("svdd.service.app:app", host=host, port=port)


if __name__ == "__main__":
    main()
