"""Spine 4.2 / 4.3 binary skeleton decoding and JSON conversion.

Decoding covers everything up to and including events; the animation
section that follows is left untouched.
"""
from __future__ import annotations

import json
import math
import struct
from dataclasses import dataclass, field

from spritemesh.spine.reader import BinaryReader, SkelFormatError

SUPPORTED_VERSIONS = ("4.2", "4.3")

INHERIT = ("normal", "onlyTranslation", "noRotationOrReflection", "noScale", "noScaleOrReflection")
BLEND = ("normal", "additive", "multiply", "screen")
POSITION_MODE = ("fixed", "percent")
SPACING_MODE = ("length", "fixed", "percent", "proportional")
ROTATE_MODE = ("tangent", "chain", "chainScale")
ATTACHMENT_TYPES = ("region", "boundingbox", "mesh", "linkedmesh", "path", "point", "clipping")
# attachment kinds surfaced to callers; the rest map to "other"
KINDS = {"region": "region", "mesh": "mesh", "boundingbox": "boundingbox", "path": "path", "clipping": "clipping"}

WHITE = 0xFFFFFFFF


def _f32(v: float) -> float:
    return struct.unpack(">f", struct.pack(">f", v))[0]


@dataclass
class SkeletonInfo:
    hash: str | None
    version: str
    x: float = 0.0
    y: float = 0.0
    width: float = 0.0
    height: float = 0.0
    reference_scale: float = 100.0
    nonessential: bool = False
    fps: float | None = None
    images: str | None = None
    audio: str | None = None


@dataclass
class Bone:
    name: str
    parent: int | None
    rotation: float = 0.0
    x: float = 0.0
    y: float = 0.0
    scale_x: float = 1.0
    scale_y: float = 1.0
    shear_x: float = 0.0
    shear_y: float = 0.0
    length: float = 0.0
    inherit: int = 0
    skin_required: bool = False
    color: int | None = None
    icon: str | None = None
    visible: bool | None = None


@dataclass
class Slot:
    name: str
    bone: int
    color: int = WHITE
    dark: int | None = None
    attachment: str | None = None
    blend: int = 0
    visible: bool | None = None


@dataclass
class Constraint:
    """IK, transform, path or physics constraint.

    ``data`` keeps the decoded fields under their Spine JSON names; bone and
    slot references stay as indices.
    """

    kind: str
    name: str
    order: int
    data: dict = field(default_factory=dict)


@dataclass
class RegionGeom:
    x: float
    y: float
    rotation: float
    scale_x: float
    scale_y: float
    width: float
    height: float


@dataclass
class MeshGeom:
    """Mesh geometry.  ``hull_length`` follows the runtime convention (2 x hull vertex count)."""

    vertex_count: int
    vertices: list[float]
    uvs: list[float]
    triangles: list[int]
    hull_length: int
    weighted: bool = False
    edges: list[int] | None = None
    width: float | None = None
    height: float | None = None

    @property
    def hull_count(self) -> int:
        return self.hull_length // 2


@dataclass
class Attachment:
    kind: str
    type_name: str
    name: str
    path: str | None = None
    color: int | None = None
    sequence: tuple[int, int, int, int] | None = None
    region: RegionGeom | None = None
    mesh: MeshGeom | None = None
    extra: dict = field(default_factory=dict)
    raw_length: int = field(default=0, compare=False)


@dataclass
class Skin:
    name: str
    attachments: dict[int, dict[str, Attachment]] = field(default_factory=dict)
    bones: list[int] | None = None
    ik: list[int] | None = None
    transform: list[int] | None = None
    path: list[int] | None = None
    physics: list[int] | None = None
    color: int | None = None


@dataclass
class Event:
    name: str
    int_value: int = 0
    float_value: float = 0.0
    string: str | None = None
    audio: str | None = None
    volume: float = 1.0
    balance: float = 0.0


@dataclass
class SkelDocument:
    skeleton: SkeletonInfo
    bones: list[Bone] = field(default_factory=list)
    slots: list[Slot] = field(default_factory=list)
    ik: list[Constraint] = field(default_factory=list)
    transform: list[Constraint] = field(default_factory=list)
    path: list[Constraint] = field(default_factory=list)
    physics: list[Constraint] = field(default_factory=list)
    skins: list[Skin] = field(default_factory=list)
    events: list[Event] = field(default_factory=list)
    string_pool: list[str | None] = field(default_factory=list, compare=False)
    end_offset: int = field(default=0, compare=False)

    def mesh_attachments(self):
        """Yield (skin, slot index, key, attachment) for every mesh attachment."""
        for skin in self.skins:
            for slot, atts in skin.attachments.items():
                for key, att in atts.items():
                    if att.kind == "mesh":
                        yield skin, slot, key, att


# ---------------------------------------------------------------- decoding


def _enum(r: BinaryReader, value: int, names: tuple, what: str, start: int) -> int:
    if not 0 <= value < len(names):
        raise r.error(f"invalid {what} {value}", start)
    return value


def _index(r: BinaryReader, limit: int, what: str) -> int:
    start = r.pos
    i = r.read_varint(True)
    if not 0 <= i < limit:
        raise r.error(f"{what} index {i} out of range (count {limit})", start)
    return i


def _read_header(r: BinaryReader) -> SkeletonInfo:
    r.section = "header"
    h = r.read_long()
    start = r.pos
    version = r.read_string()
    if not version or not version.startswith(SUPPORTED_VERSIONS):
        raise SkelFormatError(f"unsupported skeleton version {version!r}", start, "header")
    info = SkeletonInfo(hash=None if h == 0 else str(h), version=version)
    info.x, info.y, info.width, info.height, info.reference_scale = r.read_floats(5)
    info.nonessential = r.read_bool()
    if info.nonessential:
        info.fps = r.read_float()
        info.images = r.read_string()
        info.audio = r.read_string()
    return info


def _read_bones(r: BinaryReader, nonessential: bool) -> list[Bone]:
    r.section = "bones"
    bones = []
    for i in range(r.read_count("bone")):
        name = r.read_string()
        parent = None if i == 0 else _index(r, i, "parent bone")
        b = Bone(name=name, parent=parent)
        (b.rotation, b.x, b.y, b.scale_x, b.scale_y, b.shear_x, b.shear_y, b.length) = r.read_floats(8)
        start = r.pos
        b.inherit = _enum(r, r.read_byte(), INHERIT, "inherit mode", start)
        b.skin_required = r.read_bool()
        if nonessential:
            b.color = r.read_int() & WHITE
            b.icon = r.read_string()
            b.visible = r.read_bool()
        bones.append(b)
    return bones


def _read_slots(r: BinaryReader, nbones: int, nonessential: bool) -> list[Slot]:
    r.section = "slots"
    slots = []
    for _ in range(r.read_count("slot")):
        s = Slot(name=r.read_string(), bone=_index(r, nbones, "bone"))
        s.color = r.read_int() & WHITE
        dark = r.read_int()
        s.dark = None if dark == -1 else dark & 0xFFFFFF
        s.attachment = r.read_string_ref()
        start = r.pos
        s.blend = _enum(r, r.read_varint(True), BLEND, "blend mode", start)
        if nonessential:
            s.visible = r.read_bool()
        slots.append(s)
    return slots


def _bone_list(r: BinaryReader, nbones: int) -> list[int]:
    return [_index(r, nbones, "bone") for _ in range(r.read_count("bone"))]


def _read_ik(r: BinaryReader, nbones: int) -> list[Constraint]:
    r.section = "ik"
    out = []
    for _ in range(r.read_count("ik constraint")):
        name, order = r.read_string(), r.read_varint(True)
        bones = _bone_list(r, nbones)
        target = _index(r, nbones, "target bone")
        flags = r.read_ubyte()
        d = {
            "bones": bones,
            "target": target,
            "skin": bool(flags & 1),
            "bendPositive": bool(flags & 2),
            "compress": bool(flags & 4),
            "stretch": bool(flags & 8),
            "uniform": bool(flags & 16),
            "mix": 0.0,
            "softness": 0.0,
        }
        if flags & 32:
            d["mix"] = r.read_float() if flags & 64 else 1.0
        if flags & 128:
            d["softness"] = r.read_float()
        out.append(Constraint("ik", name, order, d))
    return out


_TRANSFORM_OFFSETS = ("rotation", "x", "y", "scaleX", "scaleY")
_TRANSFORM_MIXES = ("shearY", "mixRotate", "mixX", "mixY", "mixScaleX", "mixScaleY", "mixShearY")


def _read_transform(r: BinaryReader, nbones: int) -> list[Constraint]:
    r.section = "transform"
    out = []
    for _ in range(r.read_count("transform constraint")):
        name, order = r.read_string(), r.read_varint(True)
        bones = _bone_list(r, nbones)
        target = _index(r, nbones, "target bone")
        flags = r.read_ubyte()
        d = {"bones": bones, "target": target, "skin": bool(flags & 1),
             "local": bool(flags & 2), "relative": bool(flags & 4)}
        for bit, key in zip((8, 16, 32, 64, 128), _TRANSFORM_OFFSETS):
            d[key] = r.read_float() if flags & bit else 0.0
        flags = r.read_ubyte()
        for bit, key in zip((1, 2, 4, 8, 16, 32, 64), _TRANSFORM_MIXES):
            d[key] = r.read_float() if flags & bit else 0.0
        out.append(Constraint("transform", name, order, d))
    return out


def _read_path(r: BinaryReader, nbones: int, nslots: int) -> list[Constraint]:
    r.section = "path"
    out = []
    for _ in range(r.read_count("path constraint")):
        name, order = r.read_string(), r.read_varint(True)
        skin = r.read_bool()
        bones = _bone_list(r, nbones)
        target = _index(r, nslots, "target slot")
        start = r.pos
        flags = r.read_ubyte()
        spacing = (flags >> 1) & 3
        rotate = (flags >> 3) & 3
        _enum(r, rotate, ROTATE_MODE, "rotate mode", start)
        d = {"bones": bones, "target": target, "skin": skin,
             "positionMode": flags & 1, "spacingMode": spacing, "rotateMode": rotate,
             "rotation": r.read_float() if flags & 128 else 0.0}
        d["position"], d["spacing"], d["mixRotate"], d["mixX"], d["mixY"] = r.read_floats(5)
        out.append(Constraint("path", name, order, d))
    return out


_PHYSICS_OPTIONAL = ("x", "y", "rotate", "scaleX", "shearX")
_PHYSICS_GLOBALS = ("inertiaGlobal", "strengthGlobal", "dampingGlobal", "massGlobal",
                    "windGlobal", "gravityGlobal", "mixGlobal")


def _read_physics(r: BinaryReader, nbones: int) -> list[Constraint]:
    r.section = "physics"
    out = []
    for _ in range(r.read_count("physics constraint")):
        name, order = r.read_string(), r.read_varint(True)
        bone = _index(r, nbones, "bone")
        flags = r.read_ubyte()
        d = {"bone": bone, "skin": bool(flags & 1)}
        for bit, key in zip((2, 4, 8, 16, 32), _PHYSICS_OPTIONAL):
            d[key] = r.read_float() if flags & bit else 0.0
        d["limit"] = r.read_float() if flags & 64 else 5000.0
        start = r.pos
        d["fps"] = r.read_ubyte()
        if d["fps"] == 0:
            raise r.error("physics fps must be > 0", start)
        d["inertia"], d["strength"], d["damping"] = r.read_floats(3)
        d["massInverse"] = r.read_float() if flags & 128 else 1.0
        d["wind"], d["gravity"] = r.read_floats(2)
        flags = r.read_ubyte()
        for bit, key in zip((1, 2, 4, 8, 16, 32, 64), _PHYSICS_GLOBALS):
            d[key] = bool(flags & bit)
        d["mix"] = r.read_float() if flags & 128 else 1.0
        out.append(Constraint("physics", name, order, d))
    return out


def _read_vertices(r: BinaryReader, weighted: bool) -> tuple[int, list[float]]:
    n = r.read_count("vertex")
    if not weighted:
        return n, r.read_floats(2 * n)
    flat: list[float] = []
    for _ in range(n):
        k = r.read_count("vertex bone")
        flat.append(k)
        for _ in range(k):
            flat.append(r.read_varint(True))
            flat.extend(r.read_floats(3))
    return n, flat


def _read_sequence(r: BinaryReader) -> tuple[int, int, int, int]:
    return tuple(r.read_varint(True) for _ in range(4))


def _read_attachment(r: BinaryReader, key: str, nslots: int, nonessential: bool) -> Attachment:
    start = r.pos
    flags = r.read_ubyte()
    name = r.read_string_ref() if flags & 8 else key
    t = flags & 7
    if t >= len(ATTACHMENT_TYPES):
        raise r.error(f"unknown attachment type {t}", start)
    tname = ATTACHMENT_TYPES[t]
    att = Attachment(kind=KINDS.get(tname, "other"), type_name=tname, name=name)
    if tname == "region":
        att.path = r.read_string_ref() if flags & 16 else None
        att.color = r.read_int() & WHITE if flags & 32 else WHITE
        att.sequence = _read_sequence(r) if flags & 64 else None
        rot = r.read_float() if flags & 128 else 0.0
        x, y, sx, sy, w, h = r.read_floats(6)
        att.region = RegionGeom(x, y, rot, sx, sy, w, h)
    elif tname == "mesh":
        att.path = r.read_string_ref() if flags & 16 else None
        att.color = r.read_int() & WHITE if flags & 32 else WHITE
        att.sequence = _read_sequence(r) if flags & 64 else None
        hull = r.read_count("hull")
        n, verts = _read_vertices(r, bool(flags & 128))
        uvs = r.read_floats(2 * n)
        ntri = 2 * n - hull - 2
        if ntri < 0:
            raise r.error(f"hull of {hull} vertices inconsistent with {n} vertices", start)
        tris = r.read_varints(3 * ntri)
        bad = [i for i in tris if i >= n]
        if bad:
            raise r.error(f"triangle index {bad[0]} out of range ({n} vertices)", start)
        mesh = MeshGeom(n, verts, uvs, tris, 2 * hull, weighted=bool(flags & 128))
        if nonessential:
            mesh.edges = r.read_varints(r.read_count("edge"))
            mesh.width, mesh.height = r.read_floats(2)
        att.mesh = mesh
    elif tname == "linkedmesh":
        att.path = r.read_string_ref() if flags & 16 else None
        att.color = r.read_int() & WHITE if flags & 32 else WHITE
        att.sequence = _read_sequence(r) if flags & 64 else None
        att.extra = {"timelines": bool(flags & 128), "skin": r.read_varint(True), "parent": r.read_string_ref()}
        if nonessential:
            att.extra["width"], att.extra["height"] = r.read_floats(2)
    elif tname == "boundingbox":
        n, verts = _read_vertices(r, bool(flags & 16))
        att.extra = {"vertexCount": n, "vertices": verts, "weighted": bool(flags & 16)}
        if nonessential:
            att.color = r.read_int() & WHITE
    elif tname == "path":
        n, verts = _read_vertices(r, bool(flags & 64))
        att.extra = {"closed": bool(flags & 16), "constantSpeed": bool(flags & 32),
                     "vertexCount": n, "vertices": verts, "weighted": bool(flags & 64),
                     "lengths": r.read_floats(n // 3)}
        if nonessential:
            att.color = r.read_int() & WHITE
    elif tname == "point":
        rot, x, y = r.read_floats(3)
        att.extra = {"rotation": rot, "x": x, "y": y}
        if nonessential:
            att.color = r.read_int() & WHITE
    else:  # clipping
        end = _index(r, nslots, "clipping end slot")
        n, verts = _read_vertices(r, bool(flags & 16))
        att.extra = {"end": end, "vertexCount": n, "vertices": verts, "weighted": bool(flags & 16)}
        if nonessential:
            att.color = r.read_int() & WHITE
    att.raw_length = r.pos - start
    return att


def _read_skin(r: BinaryReader, doc: SkelDocument, default: bool) -> Skin | None:
    nonessential = doc.skeleton.nonessential
    if default:
        nslot = r.read_count("skin slot")
        if nslot == 0:
            return None
        skin = Skin("default")
    else:
        skin = Skin(r.read_string())
        if nonessential:
            skin.color = r.read_int() & WHITE
        skin.bones = _bone_list(r, len(doc.bones))
        skin.ik = [_index(r, len(doc.ik), "ik constraint") for _ in range(r.read_count("ik"))]
        skin.transform = [_index(r, len(doc.transform), "transform constraint")
                          for _ in range(r.read_count("transform"))]
        skin.path = [_index(r, len(doc.path), "path constraint") for _ in range(r.read_count("path"))]
        skin.physics = [_index(r, len(doc.physics), "physics constraint")
                        for _ in range(r.read_count("physics"))]
        nslot = r.read_count("skin slot")
    for _ in range(nslot):
        slot = _index(r, len(doc.slots), "slot")
        atts = skin.attachments.setdefault(slot, {})
        for _ in range(r.read_count("attachment")):
            start = r.pos
            key = r.read_string_ref()
            if key is None:
                raise r.error("attachment with null name", start)
            atts[key] = _read_attachment(r, key, len(doc.slots), nonessential)
    return skin


def _read_events(r: BinaryReader) -> list[Event]:
    r.section = "events"
    out = []
    for _ in range(r.read_count("event")):
        e = Event(name=r.read_string())
        e.int_value = r.read_varint(False)
        e.float_value = r.read_float()
        e.string = r.read_string()
        e.audio = r.read_string()
        if e.audio is not None:
            e.volume, e.balance = r.read_floats(2)
        out.append(e)
    return out


def parse_skel(data: bytes) -> SkelDocument:
    """Decode a binary skeleton up to (not including) its animations."""
    r = BinaryReader(data)
    doc = SkelDocument(skeleton=_read_header(r))
    r.section = "strings"
    r.strings = [r.read_string() for _ in range(r.read_count("string"))]
    doc.string_pool = list(r.strings)
    doc.bones = _read_bones(r, doc.skeleton.nonessential)
    doc.slots = _read_slots(r, len(doc.bones), doc.skeleton.nonessential)
    doc.ik = _read_ik(r, len(doc.bones))
    doc.transform = _read_transform(r, len(doc.bones))
    doc.path = _read_path(r, len(doc.bones), len(doc.slots))
    doc.physics = _read_physics(r, len(doc.bones))
    r.section = "skins"
    default = _read_skin(r, doc, True)
    if default is not None:
        doc.skins.append(default)
    for _ in range(r.read_count("skin")):
        doc.skins.append(_read_skin(r, doc, False))
    doc.events = _read_events(r)
    doc.end_offset = r.pos
    return doc


# ---------------------------------------------------------------- JSON out


def _num(v: float) -> float | int | None:
    if isinstance(v, bool):
        raise TypeError("bool is not a number")
    if isinstance(v, int):
        return v
    if not math.isfinite(v):
        return None
    return _Float(v)


class _Float(float):
    """Float printed with 6 significant digits."""

    def text(self) -> str:
        s = "%.6g" % self
        return "0" if s == "-0" else s


def _color(c: int | None, digits: int = 8) -> str | None:
    return None if c is None else format(c, f"0{digits}x")


def _emit(obj, indent: int = 0) -> str:
    pad = "  " * indent
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, _Float):
        return obj.text()
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return _Float(obj).text() if math.isfinite(obj) else "null"
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, (list, tuple)):
        if all(not isinstance(v, (dict, list, tuple)) for v in obj):
            return "[" + ",".join(_emit(v) for v in obj) + "]"
        inner = ",\n".join(pad + "  " + _emit(v, indent + 1) for v in obj)
        return "[\n" + inner + "\n" + pad + "]"
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        inner = ",\n".join(
            pad + "  " + json.dumps(str(k), ensure_ascii=False) + ": " + _emit(v, indent + 1)
            for k, v in obj.items()
        )
        return "{\n" + inner + "\n" + pad + "}"
    raise TypeError(f"cannot emit {type(obj).__name__}")


def _put(d: dict, key: str, value) -> None:
    if value is not None:
        d[key] = value


def _skeleton_json(s: SkeletonInfo) -> dict:
    d: dict = {}
    _put(d, "hash", s.hash)
    d["spine"] = s.version
    for k, v in (("x", s.x), ("y", s.y), ("width", s.width), ("height", s.height),
                 ("referenceScale", s.reference_scale)):
        d[k] = _num(v)
    if s.nonessential:
        d["fps"] = _num(s.fps)
        _put(d, "images", s.images)
        _put(d, "audio", s.audio)
    return d


def _bone_json(b: Bone, bones: list[Bone]) -> dict:
    d = {"name": b.name}
    if b.parent is not None:
        d["parent"] = bones[b.parent].name
    for k, v in (("length", b.length), ("rotation", b.rotation), ("x", b.x), ("y", b.y),
                 ("scaleX", b.scale_x), ("scaleY", b.scale_y), ("shearX", b.shear_x), ("shearY", b.shear_y)):
        d[k] = _num(v)
    d["inherit"] = INHERIT[b.inherit]
    d["skin"] = b.skin_required
    if b.color is not None:
        d["color"] = _color(b.color)
        _put(d, "icon", b.icon)
        d["visible"] = b.visible
    return d


def _slot_json(s: Slot, bones: list[Bone]) -> dict:
    d = {"name": s.name, "bone": bones[s.bone].name, "color": _color(s.color)}
    _put(d, "dark", _color(s.dark, 6))
    _put(d, "attachment", s.attachment)
    d["blend"] = BLEND[s.blend]
    _put(d, "visible", s.visible)
    return d


def _constraint_json(c: Constraint, doc: SkelDocument) -> dict:
    d: dict = {"name": c.name, "order": c.order}
    for k, v in c.data.items():
        if k == "bones":
            v = [doc.bones[i].name for i in v]
        elif k == "bone" or (k == "target" and c.kind != "path"):
            v = doc.bones[v].name
        elif k == "target":
            v = doc.slots[v].name
        elif k == "positionMode":
            v = POSITION_MODE[v]
        elif k == "spacingMode":
            v = SPACING_MODE[v]
        elif k == "rotateMode":
            v = ROTATE_MODE[v]
        elif k == "massInverse":
            k, v = "mass", _num(1.0 / v) if v else None
        elif isinstance(v, float):
            v = _num(v)
        d[k] = v
    return d


def _nums(xs) -> list:
    return [_num(float(v)) for v in xs]


def _vertices_json(verts: list[float], weighted: bool) -> list:
    if not weighted:
        return _nums(verts)
    out: list = []
    i = 0
    while i < len(verts):
        k = int(verts[i])
        out.append(k)
        i += 1
        for _ in range(k):
            out.append(int(verts[i]))
            out.extend(_nums(verts[i + 1 : i + 4]))
            i += 4
    return out


def _attachment_json(key: str, a: Attachment, doc: SkelDocument) -> dict:
    d: dict = {"type": a.type_name}
    if a.name != key:
        d["name"] = a.name
    _put(d, "path", a.path)
    if a.color is not None:
        d["color"] = _color(a.color)
    if a.region is not None:
        g = a.region
        for k, v in (("x", g.x), ("y", g.y), ("scaleX", g.scale_x), ("scaleY", g.scale_y),
                     ("rotation", g.rotation), ("width", g.width), ("height", g.height)):
            d[k] = _num(v)
    elif a.mesh is not None:
        m = a.mesh
        d["uvs"] = _nums(m.uvs)
        d["triangles"] = list(m.triangles)
        d["vertices"] = _vertices_json(m.vertices, m.weighted)
        d["hull"] = m.hull_count
        if m.edges is not None:
            d["edges"] = list(m.edges)
        if m.width is not None:
            d["width"], d["height"] = _num(m.width), _num(m.height)
    else:
        for k, v in a.extra.items():
            if k == "weighted":
                continue
            if k == "vertices":
                v = _vertices_json(v, a.extra.get("weighted", False))
            elif k == "lengths":
                v = _nums(v)
            elif k == "end":
                v = doc.slots[v].name
            elif k == "skin":
                v = doc.skins[v].name if 0 <= v < len(doc.skins) else v
            elif isinstance(v, float):
                v = _num(v)
            d[k] = v
    if a.sequence is not None:
        d["sequence"] = dict(zip(("count", "start", "digits", "setup"), a.sequence))
    return d


def _skin_json(s: Skin, doc: SkelDocument) -> dict:
    d: dict = {"name": s.name}
    if s.color is not None:
        d["color"] = _color(s.color)
    if s.bones is not None:
        d["bones"] = [doc.bones[i].name for i in s.bones]
        d["ik"] = [doc.ik[i].name for i in s.ik]
        d["transform"] = [doc.transform[i].name for i in s.transform]
        d["path"] = [doc.path[i].name for i in s.path]
        d["physics"] = [doc.physics[i].name for i in s.physics]
    d["attachments"] = {
        doc.slots[slot].name: {k: _attachment_json(k, a, doc) for k, a in atts.items()}
        for slot, atts in s.attachments.items()
    }
    return d


def _event_json(e: Event) -> dict:
    d: dict = {"int": e.int_value, "float": _num(e.float_value)}
    _put(d, "string", e.string)
    if e.audio is not None:
        d["audio"] = e.audio
        d["volume"] = _num(e.volume)
        d["balance"] = _num(e.balance)
    return d


def skel_to_dict(doc: SkelDocument) -> dict:
    return {
        "skeleton": _skeleton_json(doc.skeleton),
        "bones": [_bone_json(b, doc.bones) for b in doc.bones],
        "slots": [_slot_json(s, doc.bones) for s in doc.slots],
        "ik": [_constraint_json(c, doc) for c in doc.ik],
        "transform": [_constraint_json(c, doc) for c in doc.transform],
        "path": [_constraint_json(c, doc) for c in doc.path],
        "physics": [_constraint_json(c, doc) for c in doc.physics],
        "skins": [_skin_json(s, doc) for s in doc.skins],
        "events": {e.name: _event_json(e) for e in doc.events},
    }


def skel_to_json(doc: SkelDocument) -> bytes:
    """Deterministic UTF-8 JSON using Spine's JSON field names."""
    return (_emit(skel_to_dict(doc)) + "\n").encode("utf-8")


# ---------------------------------------------------------------- JSON in


def _opt_f32(v) -> float | None:
    return None if v is None else _f32(float(v))


def _lookup(names: list[str], value, what: str) -> int:
    try:
        return names.index(value)
    except ValueError:
        raise ValueError(f"unknown {what} {value!r}") from None


def _vertices_from_json(vs: list, weighted: bool) -> list[float]:
    if not weighted:
        return [_f32(v) for v in vs]
    out: list[float] = []
    i = 0
    while i < len(vs):
        k = int(vs[i])
        out.append(k)
        i += 1
        for _ in range(k):
            out.append(int(vs[i]))
            out.extend(_f32(v) for v in vs[i + 1 : i + 4])
            i += 4
    return out


def _attachment_from_json(key: str, d: dict, slot_names, skin_names) -> Attachment:
    t = d.get("type", "region")
    color = d.get("color")
    att = Attachment(kind=KINDS.get(t, "other"), type_name=t, name=d.get("name", key), path=d.get("path"),
                     color=None if color is None else int(color, 16))
    if "sequence" in d:
        s = d["sequence"]
        att.sequence = (s["count"], s["start"], s["digits"], s["setup"])
    if t == "region":
        att.region = RegionGeom(*(_f32(d.get(k, dv)) for k, dv in (
            ("x", 0), ("y", 0), ("rotation", 0), ("scaleX", 1), ("scaleY", 1), ("width", 0), ("height", 0))))
    elif t == "mesh":
        uvs = [_f32(v) for v in d["uvs"]]
        n = len(uvs) // 2
        weighted = len(d["vertices"]) > len(uvs)
        m = MeshGeom(n, _vertices_from_json(d["vertices"], weighted), uvs, list(d["triangles"]),
                     2 * int(d.get("hull", 0)), weighted=weighted)
        if "edges" in d:
            m.edges = list(d["edges"])
        if "width" in d:
            m.width, m.height = _f32(d["width"]), _f32(d["height"])
        att.mesh = m
    else:
        extra = {}
        for k, v in d.items():
            if k in ("type", "name", "path", "color", "sequence"):
                continue
            if k == "vertices":
                weighted = len(v) != 2 * d["vertexCount"]
                v = _vertices_from_json(v, weighted)
            elif k == "lengths":
                v = [_f32(x) for x in v]
            elif k == "end":
                v = _lookup(slot_names, v, "slot")
            elif k == "skin":
                v = _lookup(skin_names, v, "skin") if isinstance(v, str) else v
            elif isinstance(v, float) or (isinstance(v, int) and not isinstance(v, bool) and k in
                                           ("rotation", "x", "y", "width", "height")):
                v = _f32(v)
            extra[k] = v
            if k == "vertices":
                extra["weighted"] = weighted
        att.extra = extra
    return att


_FLOAT_CONSTRAINT_KEYS = {"mix", "softness", "rotation", "x", "y", "scaleX", "scaleY", "shearY", "mixRotate",
                          "mixX", "mixY", "mixScaleX", "mixScaleY", "mixShearY", "position", "spacing",
                          "rotate", "shearX", "limit", "inertia", "strength", "damping", "wind", "gravity"}


def _constraint_from_json(kind: str, d: dict, bone_names, slot_names) -> Constraint:
    data = {}
    for k, v in d.items():
        if k in ("name", "order"):
            continue
        if k == "bones":
            v = [_lookup(bone_names, b, "bone") for b in v]
        elif k == "bone" or (k == "target" and kind != "path"):
            v = _lookup(bone_names, v, "bone")
        elif k == "target":
            v = _lookup(slot_names, v, "slot")
        elif k == "positionMode":
            v = POSITION_MODE.index(v)
        elif k == "spacingMode":
            v = SPACING_MODE.index(v)
        elif k == "rotateMode":
            v = ROTATE_MODE.index(v)
        elif k == "mass":
            k, v = "massInverse", _f32(1.0 / v) if v else 0.0
        elif k in _FLOAT_CONSTRAINT_KEYS:
            v = _f32(v)
        data[k] = v
    return Constraint(kind, d["name"], d["order"], data)


def skel_from_dict(j: dict) -> SkelDocument:
    """Rebuild a document from :func:`skel_to_dict` output."""
    s = j["skeleton"]
    nonessential = "fps" in s
    info = SkeletonInfo(hash=s.get("hash"), version=s["spine"], nonessential=nonessential,
                        x=_f32(s.get("x", 0)), y=_f32(s.get("y", 0)), width=_f32(s.get("width", 0)),
                        height=_f32(s.get("height", 0)), reference_scale=_f32(s.get("referenceScale", 100)))
    if nonessential:
        info.fps, info.images, info.audio = _opt_f32(s["fps"]), s.get("images"), s.get("audio")
    doc = SkelDocument(skeleton=info)
    bone_names = [b["name"] for b in j.get("bones", [])]
    for b in j.get("bones", []):
        bone = Bone(name=b["name"], parent=_lookup(bone_names, b["parent"], "bone") if "parent" in b else None,
                    length=_f32(b.get("length", 0)), rotation=_f32(b.get("rotation", 0)),
                    x=_f32(b.get("x", 0)), y=_f32(b.get("y", 0)),
                    scale_x=_f32(b.get("scaleX", 1)), scale_y=_f32(b.get("scaleY", 1)),
                    shear_x=_f32(b.get("shearX", 0)), shear_y=_f32(b.get("shearY", 0)),
                    inherit=INHERIT.index(b.get("inherit", "normal")), skin_required=b.get("skin", False))
        if "color" in b:
            bone.color, bone.icon, bone.visible = int(b["color"], 16), b.get("icon"), b.get("visible")
        doc.bones.append(bone)
    slot_names = [s["name"] for s in j.get("slots", [])]
    for s in j.get("slots", []):
        doc.slots.append(Slot(name=s["name"], bone=_lookup(bone_names, s["bone"], "bone"),
                              color=int(s.get("color", "ffffffff"), 16),
                              dark=int(s["dark"], 16) if "dark" in s else None,
                              attachment=s.get("attachment"), blend=BLEND.index(s.get("blend", "normal")),
                              visible=s.get("visible")))
    for kind in ("ik", "transform", "path", "physics"):
        setattr(doc, kind, [_constraint_from_json(kind, c, bone_names, slot_names) for c in j.get(kind, [])])
    skin_names = [s["name"] for s in j.get("skins", [])]
    for sd in j.get("skins", []):
        skin = Skin(sd["name"], color=int(sd["color"], 16) if "color" in sd else None)
        if "bones" in sd:
            skin.bones = [_lookup(bone_names, b, "bone") for b in sd["bones"]]
            for kind in ("ik", "transform", "path", "physics"):
                names = [c.name for c in getattr(doc, kind)]
                setattr(skin, kind, [_lookup(names, c, kind) for c in sd.get(kind, [])])
        for slot_name, atts in sd.get("attachments", {}).items():
            slot = _lookup(slot_names, slot_name, "slot")
            skin.attachments[slot] = {k: _attachment_from_json(k, a, slot_names, skin_names)
                                      for k, a in atts.items()}
        doc.skins.append(skin)
    for name, e in j.get("events", {}).items():
        ev = Event(name=name, int_value=e.get("int", 0), float_value=_f32(e.get("float", 0)),
                   string=e.get("string"), audio=e.get("audio"))
        if ev.audio is not None:
            ev.volume, ev.balance = _f32(e.get("volume", 1)), _f32(e.get("balance", 0))
        doc.events.append(ev)
    return doc


def skel_from_json(blob: bytes | str) -> SkelDocument:
    return skel_from_dict(json.loads(blob))


def convert_file_bytes(data: bytes, suffix: str) -> bytes:
    """``.skel`` bytes to converter JSON; ``.json`` input passes through unchanged after a sanity check."""
    if suffix.lower() == ".json":
        try:
            j = json.loads(data)
        except (UnicodeDecodeError, json.JSONDecodeError) as exc:
            raise SkelFormatError(f"invalid JSON skeleton: {exc}") from None
        if not isinstance(j, dict) or "skeleton" not in j:
            raise SkelFormatError("JSON skeleton lacks a 'skeleton' object")
        return data
    return skel_to_json(parse_skel(data))
