from .codecs import (
    BUILTIN_CODECS,
    CodecError,
    CodecSpec,
    build_t03,
    codec_augment,
    codec_set_from_config,
)
from .manifest import (
    CSV_HEADER,
    ClipRecord,
    Manifest,
    ManifestError,
    PARTITIONS,
    REFERENCE_COUNTS,
    VARIANTS,
    flag_missing_audio,
    load_manifest,
    make_reference_manifest,
    parse_manifest,
    save_manifest,
    validate_against_reference,
)
from .synthetic import DEFAULT_CODECS, DEFAULT_SIZES, generate_surrogate, synth_clip

__all__ = [
    "BUILTIN_CODECS",
    "CSV_HEADER",
    "ClipRecord",
    "CodecError",
    "CodecSpec",
    "DEFAULT_CODECS",
    "DEFAULT_SIZES",
    "Manifest",
    "ManifestError",
    "PARTITIONS",
    "REFERENCE_COUNTS",
    "VARIANTS",
    "build_t03",
    "codec_augment",
    "codec_set_from_config",
    "flag_missing_audio",
    "generate_surrogate",
    "load_manifest",
    "make_reference_manifest",
    "parse_manifest",
    "save_manifest",
    "synth_clip",
    "validate_against_reference",
]
