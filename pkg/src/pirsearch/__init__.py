"""Content-based image and scene retrieval over qualitative spatial
relations.

Images are encoded symbolically: an ordered list of named, attributed
objects plus one relation triple per object pair, combining a region
topological relation with the two Allen interval relations of the
objects' axis projections. Retrieval matches a sketch or an existing
image against the catalog under a user threshold, optionally up to
rotation and reflection, and extends to moving-object scenes.
"""

from .geometry import EPS, Interval, Point, Polygon, rectangle
from .relations import (
    D4,
    PIR,
    AllenRel,
    TopoRel,
    allen_converse,
    allen_distance,
    allen_mirror,
    allen_relation,
    compute_pir,
    pir_converse,
    pir_distance,
    topo_distance,
    topo_relation,
    transform_pir,
)
from .bilist import (
    BiList,
    ImageObject,
    SketchQuery,
    build_bilist,
    deserialize,
    pir_between,
    serialize,
    transform_bilist,
)
from .descriptors import (
    ColorDescriptor,
    ShapeDescriptor,
    TextureDescriptor,
    average_color,
    color_distance,
    shape_descriptor,
    shape_distance,
    texture_descriptor,
    texture_distance,
)
from .similarity import (
    MatchParams,
    ScoredResult,
    image_similarity,
    invariant_similarity,
    match_objects,
    relation_similarity,
    retrieve,
    visual_similarity,
)
from .motion import (
    Compass,
    Scene,
    TimeInterval,
    TimedPIR,
    Track,
    TrackStep,
    build_scene,
    derive_timeline,
    derive_track,
    scene_from_dict,
    scene_similarity,
    track_distance,
)
from .store import Catalog, ImageRecord, candidates, insert, load, make_thumbnail, persist
from .engine import Annotation, AnnotationObject, Engine, annotation_from_dict
from .evaluation import (
    CategorySpec,
    CorpusSpec,
    default_spec,
    generate_corpus,
    render_csv,
    render_text,
    sweep,
)

__version__ = "0.1.0"
