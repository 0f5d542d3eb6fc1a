from spritemesh.imgproc.canny import canny, multi_channel_canny
from spritemesh.imgproc.contours import Contour, extract_edge_chains, trace_outer_contours
from spritemesh.imgproc.distance import distance_transform
from spritemesh.imgproc.filters import alpha_threshold, bilateral_filter, gaussian_blur
from spritemesh.imgproc.morphology import close, dilate, erode

__all__ = [
    "Contour", "alpha_threshold", "bilateral_filter", "canny", "close", "dilate",
    "distance_transform", "erode", "extract_edge_chains", "gaussian_blur",
    "multi_channel_canny", "trace_outer_contours",
]
