from spritemesh.spine.atlas import AtlasIndex, AtlasPage, AtlasRegion, crop_region, parse_atlas, write_atlas
from spritemesh.spine.gt import extract_gt_mesh
from spritemesh.spine.reader import BinaryReader, SkelFormatError
from spritemesh.spine.skel import Attachment, SkelDocument, parse_skel, skel_from_json, skel_to_json

__all__ = [
    "AtlasIndex", "AtlasPage", "AtlasRegion", "Attachment", "BinaryReader", "SkelDocument",
    "SkelFormatError", "crop_region", "extract_gt_mesh", "parse_atlas", "parse_skel",
    "skel_from_json", "skel_to_json", "write_atlas",
]
