#!/usr/bin/env python3

""" Cattle muzzle identification toolkit

Usage:
    MuzzleId prepare [--config=<file>] [--corpus=<dir>] [--out=<path>] [--seed=<n>] [--debug]
    MuzzleId compress --quality=<q> --in=<dir> --out=<path> [--engine=<name>] [--optimize] [--preview=<n>] [--config=<file>] [--debug]
    MuzzleId train --manifest=<file> --out=<path> [--backbone=<name>] [--quality=<q>] [--freeze-backbone] [--seed=<n>] [--config=<file>] [--debug]
    MuzzleId sweep [--config=<file>] [--corpus=<dir>] [--manifest=<file>] [--run-dir=<dir>] [--engine=<name>] [--cross-quality] [--seed=<n>] [--debug]
    MuzzleId evaluate --checkpoint=<file> --manifest=<file> [--all] [--config=<file>] [--debug]
    MuzzleId identify --checkpoint=<file> <image> [--top-k=<n>] [--config=<file>] [--debug]
    MuzzleId report <run_dir> [--debug]

Options:
    -c <file>, --config=<file>          Config file path (built-in defaults when omitted)
    --corpus=<dir>                      Corpus root, one sub directory per animal
    --manifest=<file>                   Dataset manifest produced by prepare
    --out=<path>                        Output file or directory
    --in=<dir>                          Corpus root to compress
    --quality=<q>                       Quality level in [1, 100]
    --engine=<name>                     Compression engine: standard or reference
    --optimize                          Optimize the standard engine's Huffman tables
    --preview=<n>                       Write an original/compressed montage of n images
    --backbone=<name>                   Backbone: wide_resnet50 or vgg16_bn
    --freeze-backbone                   Only train the identification head
    --seed=<n>                          Override the split and training seeds
    --run-dir=<dir>                     Run directory (timestamped under the runs root when omitted)
    --cross-quality                     Evaluate every cell on every quality level
    --checkpoint=<file>                 Trained checkpoint (best.pt)
    --all                               Evaluate on every record instead of the test split
    --top-k=<n>                         Number of ranked candidates [default: 1]
    --debug                             Debug mode
    --help                              Display Help

"""

import json
import logging
import os
import sys
from dataclasses import replace

from docopt import docopt

from .Config import Config, load_config
from .Errors import ConfigError, DataError, CheckpointError, LeakageError
from .augment.Pipeline import AugmentationConfig
from .compression.CorpusCompressor import CorpusCompressor
from .compression.Preview import write_preview
from .compression.Quantization import QualityLevel, MAX_QUALITY
from .compression.RateDistortion import rate_distortion_report
from .dataset.CorpusScanner import scan_corpus
from .dataset.DatasetManifest import load_manifest, save_manifest
from .dataset.Split import stratified_split
from .experiment.GridRunner import GridRunner, MANIFEST_FILE, RESULTS_FILE
from .experiment.Identifier import Identifier
from .experiment.ResultsTable import tables_from_csv
from .model.Checkpoint import restore_model
from .model.ClassifierModel import build_model
from .training.Trainer import train, evaluate_accuracy, timing_report

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_CELL_FAILURES = 3

DEFAULT_MANIFEST = "manifest.json"
PREVIEW_FILE = "preview.png"

_logger = logging.getLogger(__name__)


def _int_option(args: dict, name: str):
    value = args[name]
    if value is None:
        return None
    try:
        return int(value)
    except ValueError:
        raise ValueError("%s expects an integer, got '%s'" % (name, value))


def _with_seed(config: Config, seed) -> Config:
    if seed is None:
        return config
    return replace(config, split=replace(config.split, seed=seed), training=replace(config.training, seed=seed),
                   augmentation=replace(config.augmentation, seed=seed))


def prepare(args: dict, config: Config) -> int:
    config = _with_seed(config, _int_option(args, "--seed"))
    manifest = scan_corpus(args["--corpus"] or config.corpus.root, config.corpus.workers)
    split = stratified_split(manifest, config.split)
    manifest = manifest.with_split(split, config.split.seed, config.split.train_fraction)
    save_manifest(manifest, args["--out"] or config.corpus.manifest or DEFAULT_MANIFEST)
    _logger.info("Split fingerprint %s", split.fingerprint())
    return EXIT_OK


def compress(args: dict, config: Config) -> int:
    q = QualityLevel(_int_option(args, "--quality"))
    cfg = replace(config.compression, qualities=(q,), engine=args["--engine"] or config.compression.engine,
                  optimize=args["--optimize"] or config.compression.optimize)
    manifest = scan_corpus(args["--in"], config.corpus.workers)
    compressor = CorpusCompressor(manifest, args["--out"], cfg)
    report = compressor.compress(q)
    save_manifest(compressor.compressed_manifest(), os.path.join(args["--out"], MANIFEST_FILE))
    print(rate_distortion_report([report]).to_text())
    preview = _int_option(args, "--preview")
    if preview:
        samples = [records[0] for records in manifest.records_by_class().values()][:preview]
        write_preview(samples, compressor.path_map, os.path.join(args["--out"], PREVIEW_FILE))
    return EXIT_OK


def train_model(args: dict, config: Config) -> int:
    config = _with_seed(config, _int_option(args, "--seed"))
    manifest = load_manifest(args["--manifest"])
    split = manifest.split or stratified_split(manifest, config.split)
    q = QualityLevel(_int_option(args, "--quality") or MAX_QUALITY)
    if q != MAX_QUALITY:
        compressor = CorpusCompressor(manifest, os.path.join(args["--out"], "compressed", "q%d" % q),
                                      replace(config.compression, qualities=(q,)))
        compressor.compress(q)
        split = split.remap(compressor.path_map)
    freeze = args["--freeze-backbone"] or config.training.freeze_backbone
    model = build_model(config.model.backbone_spec(args["--backbone"]),
                        config.model.head_spec(len(manifest.classes)), freeze)
    result = train(model, split, config.augmentation, config.training, list(manifest.classes), args["--out"])
    print(json.dumps(dict(timing_report(result), best_epoch=result.best_epoch,
                          first_epoch_accuracy=result.first_epoch_accuracy,
                          final_accuracy=result.final_accuracy), indent=2))
    return EXIT_OK


def sweep(args: dict, config: Config) -> int:
    config = _with_seed(config, _int_option(args, "--seed"))
    if args["--corpus"]:
        config = replace(config, corpus=replace(config.corpus, root=args["--corpus"]))
    if args["--engine"]:
        config = replace(config, compression=replace(config.compression, engine=args["--engine"]))
    if args["--cross-quality"]:
        config = replace(config, grid=replace(config.grid, cross_quality=True))
    manifest = load_manifest(args["--manifest"]) if args["--manifest"] else None
    result = GridRunner(config.experiment_grid(), args["--run-dir"], manifest).run()
    print(result.run_dir)
    return EXIT_CELL_FAILURES if result.failures() else EXIT_OK


def evaluate(args: dict, config: Config) -> int:
    model, payload = restore_model(args["--checkpoint"])
    manifest = load_manifest(args["--manifest"])
    if args["--all"] or manifest.split is None:
        records = list(manifest.records)
    else:
        records = list(manifest.split.test)
    class_index = {c: i for i, c in enumerate(payload["classes"])}
    unknown = {r.class_id for r in records} - set(class_index)
    if unknown:
        raise DataError("Classes unknown to the checkpoint: %s" % ", ".join(sorted(unknown)))
    target_size = payload["training_config"].get("target_size", config.augmentation.target_size)
    accuracy = evaluate_accuracy(model, records, AugmentationConfig(target_size=target_size), class_index,
                                 config.training.batch_size)
    print(json.dumps({"images": len(records), "accuracy": accuracy}))
    return EXIT_OK


def identify(args: dict, config: Config) -> int:
    identification = Identifier(args["--checkpoint"]).identify(args["<image>"], _int_option(args, "--top-k"))
    print(json.dumps({
        "predicted_class": identification.predicted_class,
        "confidence": identification.confidence,
        "top_k": [{"class_id": c, "probability": p} for c, p in identification.top_k],
        "latency_seconds": identification.latency_seconds,
    }, indent=2))
    return EXIT_OK


def report(args: dict, config: Config) -> int:
    for table in tables_from_csv(os.path.join(args["<run_dir>"], RESULTS_FILE)):
        print(table.text + "\n")
    return EXIT_OK


COMMANDS = {
    "prepare": prepare,
    "compress": compress,
    "train": train_model,
    "sweep": sweep,
    "evaluate": evaluate,
    "identify": identify,
    "report": report,
}


def main(argv=None) -> int:
    args = docopt(__doc__, argv=argv)
    # Logger
    logging.basicConfig(stream=sys.stdout, level=logging.DEBUG, format='%(asctime)s :: %(levelname)s :: %(message)s')
    try:
        config = load_config(args.get("--config"))
        logging.getLogger().setLevel('DEBUG' if args['--debug'] else config.log_level)
        command = next(name for name in COMMANDS if args[name])
        return COMMANDS[command](args, config)
    except (ConfigError, ValueError) as e:
        _logger.error(e)
        return EXIT_USAGE
    except (DataError, CheckpointError, LeakageError) as e:
        _logger.error(e)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
