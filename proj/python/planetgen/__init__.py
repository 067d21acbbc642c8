"""Deterministic procedural planet generation."""

from ._core import (
    Biome,
    ConfigError,
    ControlPoint,
    DomainError,
    FbmParams,
    Interpolation,
    InvariantError,
    IoError,
    NodeId,
    Session,
    SplineCurve,
    Terrain,
    TileMesh,
    TileDecodeError,
    build_tile,
    decode_tile,
    default_config,
    encode_tile,
    ephemeris_at,
    export_obj,
    fbm,
    generate_planet,
    neighbor,
    perlin3,
    validate_config,
    verify_planet,
)

__all__ = [
    "Biome",
    "ConfigError",
    "ControlPoint",
    "DomainError",
    "FbmParams",
    "Interpolation",
    "InvariantError",
    "IoError",
    "NodeId",
    "Session",
    "SplineCurve",
    "Terrain",
    "TileMesh",
    "TileDecodeError",
    "build_tile",
    "decode_tile",
    "default_config",
    "encode_tile",
    "ephemeris_at",
    "export_obj",
    "fbm",
    "generate_planet",
    "neighbor",
    "perlin3",
    "validate_config",
    "verify_planet",
]
