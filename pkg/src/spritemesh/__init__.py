"""Sprite image to animation-ready triangle mesh."""

from spritemesh.config import PipelineConfig
from spritemesh.raster import RasterImage, load_image

__all__ = ["PipelineConfig", "RasterImage", "load_image"]
__version__ = "0.1.0"
