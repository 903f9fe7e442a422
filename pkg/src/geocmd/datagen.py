"""Deterministic template-based dataset of (query, reference call) pairs.

Queries are rendered from per-function template pools with seeded parameter
draws, deduplicated on exact string equality, and paired with the canonical
call string they describe. The same (seed, per_function) always yields
byte-identical output, so the corpus is reproducible offline with no model
in the loop.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from geocmd.calls import (
    GIS_FUNCTIONS,
    AddLayer,
    AddMarker,
    AddVector,
    AddWMS,
    CartoProperty,
    Cartography,
    Draw,
    DrawShape,
    GeometryKind,
    GisCall,
    Move,
    MoveToExtent,
    NumberLiteral,
    ParseError,
    ZoomIn,
    ZoomOut,
    function_name,
    parse_call,
    serialize_call,
)


class TemplateExhaustion(RuntimeError):
    """The retry budget ran out before enough unique queries were produced."""


class MalformedRecord(ValueError):
    """A dataset line is not a valid record; carries the 1-based line number."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class InvalidCall(ValueError):
    """A record's call string does not parse or contradicts its label."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass(frozen=True)
class Sample:
    id: int
    function: str
    query: str
    call: str


@dataclass(frozen=True)
class SplitSpec:
    seed: int
    train_fraction: float = 0.8
    val_fraction_of_test: float = 0.5

    def __post_init__(self) -> None:
        for name in ("train_fraction", "val_fraction_of_test"):
            value = getattr(self, name)
            if not 0.0 < value < 1.0:
                raise ValueError(f"{name} must be in (0, 1), got {value}")


# ---------------------------------------------------------------------------
# Parameter pools
# ---------------------------------------------------------------------------

MARKER_LABELS = [
    "University", "Central Park", "City Hall", "Harbor View", "Old Town",
    "Main Library", "Union Station", "Riverside Cafe", "Grand Hotel",
    "North Bridge", "Eagle Peak", "Sunset Point", "Market Square",
    "History Museum", "Opera House", "Botanic Garden", "Ferry Terminal",
    "Lighthouse", "Observatory", "Stadium", "Madrid", "Portugal",
    "Home Base", "Camp Delta", "Research Station",
]

LAYER_NAMES = [
    "OpenMallMap", "OpenStreetMap", "Satellite", "Terrain", "Watercolor",
    "DarkMatter", "Topographic", "CycleRoutes", "TransitLines", "HeatZones",
    "NightLights", "AirQuality", "FloodRisk", "LandUse", "ParcelGrid",
    "HistoricSites", "TrailNetwork", "BusCorridors", "CanopyCover",
    "NoiseMap", "SnowDepth", "CropYield", "StreetView", "HarborTraffic",
    "GridBase",
]

# Slug parts are underscore-joined so geometry words never appear as
# standalone tokens inside a filename (word boundaries cannot form around
# an underscore), keeping slot extraction unambiguous.
VECTOR_SLUGS = [
    "point_zones_NY_kpn", "river_network_v2", "parcel_boundaries",
    "bus_stops_2021", "trail_segments", "city_blocks", "flood_cells",
    "transit_hubs", "bike_lanes", "census_tracts", "storm_drains",
    "harbor_docks", "fire_stations", "school_sites", "green_roofs",
    "quarry_sites", "wind_turbines", "soil_samples", "ridge_lines",
    "delta_plots",
]
VECTOR_EXTS = ["kml", "geojson", "shp", "gpx"]

WMS_HOSTS = [
    "example.activity", "geo.hazards", "maps.climate", "data.oceans",
    "tiles.urban", "services.parks", "wms.geology", "portal.energy",
    "atlas.wildlife", "grid.traffic", "hub.forestry", "map.transport",
    "geo.aviation", "layers.coastal", "cloud.weather", "open.landcover",
    "api.terrain", "feeds.seismic", "view.glaciers", "maps.hydrology",
]

WMS_THEMES = [
    "seismic activity", "rainfall", "air quality", "traffic density",
    "land cover", "snowfall", "wildfire risk", "population density",
    "elevation", "humidity",
]

COLORS = [
    "ivory", "crimson", "teal", "navy", "olive", "coral", "salmon",
    "beige", "turquoise", "magenta", "indigo", "maroon", "charcoal",
    "lavender", "mint", "gold", "silver", "amber", "plum", "emerald",
    "scarlet", "azure", "sand", "rose", "slate",
]

GEOMETRY_KINDS = ["point", "line", "polyline", "polygon"]
DRAW_SHAPES = ["point", "line", "polygon"]
CARTO_PROPERTIES = ["background", "fill", "stroke"]

ZOOM_IN_SUFFIXES = [
    "", " please", " right away", " for me", " to focus on the details",
    " so we can see the details", " before anything else", " on this map",
]
ZOOM_OUT_SUFFIXES = [
    "", " please", " a bit", " for a wider view", " so we can see more",
    " to get the bigger picture", " on this map", " now",
]
DRAW_FILLERS = [
    "", " on the map", " for me", " right here", " please", " now",
    " over the area", " quickly",
]

TEMPLATES: dict[str, list[str]] = {
    "AddMarker": [
        "Add marker '{label}' at location {x}, {y}!",
        "Drop a pin called '{label}' at {x}, {y}.",
        "Place a marker named '{label}' at {x}, {y}.",
        "Show a marker at {x}, {y} with '{label}' as label.",
        "Show marker at {x}, {y}, '{label}' is the label.",
        "Mark the spot {x}, {y} as '{label}'.",
        "Put a point of interest '{label}' at {x}, {y}.",
        "Pin '{label}' to {x}, {y} on the map.",
        "Could you add a marker for '{label}' at {x}, {y}?",
        "Create a marker labelled '{label}' at coordinates {x}, {y}.",
        "I need a pin at {x}, {y} named '{label}'.",
        "Stick a marker '{label}' right at {x}, {y}.",
        "Label the point {x}, {y} as '{label}' with a marker.",
        "New marker: '{label}' at {x}, {y}.",
        "Please mark {x}, {y} on the map as '{label}'.",
        "Set a pin for '{label}' at {x}, {y}, thanks.",
    ],
    "AddLayer": [
        "Switch to the {name} layer.",
        "Switch to the {name} layer for a fresh look.",
        "Show the {name} basemap.",
        "Turn on the {name} layer.",
        "Enable the {name} layer, please.",
        "Load the {name} basemap now.",
        "Activate the {name} layer on the map.",
        "Display the {name} layer.",
        "Bring up the {name} basemap.",
        "Put the {name} layer on screen.",
        "Add a layer called {name}.",
        "Add a basemap called {name}.",
        "Create a new layer named {name}.",
        "I want the {name} layer visible.",
        "Use the {name} basemap.",
        "Swap in the {name} layer.",
        "Let's view the {name} layer today.",
    ],
    "AddVector": [
        "Load the {geom} vector using {file}!",
        "Import {geom} features from {file}.",
        "Display the {geom} data stored in {file}.",
        "Open {file} and show its {geom} features.",
        "Overlay the {geom} vector file {file}.",
        "Add {geom} geometry from {file} to the map.",
        "Render the {geom} shapes contained in {file}.",
        "Bring in the {geom} vector data from {file}.",
        "Can you load {file} as a {geom} vector?",
        "Show the {geom} features saved in {file}.",
        "Visualize the {geom} records from {file}.",
        "Please import the {geom} vector {file}.",
        "Read {geom} features out of {file}.",
        "Load up {file}, it holds {geom} features.",
        "Pull the {geom} vector from {file} onto the map.",
        "I have {geom} data in {file}, show it.",
    ],
    "AddWMS": [
        "Show the {theme} map from WMS URL {url}.",
        "Add a WMS layer from {url}.",
        "Connect to the WMS service at {url}.",
        "Stream the WMS endpoint {url} onto the map.",
        "Use the WMS source {url}.",
        "Add the remote WMS at {url}, please.",
        "Hook up the WMS feed from {url}.",
        "Fetch map tiles from the WMS at {url}.",
        "Load the WMS service {url}.",
        "Attach {url} as a WMS layer.",
        "Integrate the WMS data at {url}.",
        "Point the map at the WMS URL {url}.",
        "Bring in WMS imagery from {url}.",
        "Display the WMS coverage at {url}.",
        "Subscribe the map to the WMS at {url}.",
        "Show WMS data from {url} on this map.",
    ],
    "Cartography": [
        "Set the {prop} color to {color}.",
        "Change the {prop} color to {color}!",
        "Make the {prop} {color}.",
        "Please turn the {prop} color {color}.",
        "Switch the map's {prop} color to {color}.",
        "I want the {prop} in {color}.",
        "Paint the {prop} {color}, please.",
        "Update the {prop} color to {color}.",
        "Could you make the {prop} color {color}?",
        "Recolor the {prop} to {color}.",
        "The {prop} should be {color} now.",
        "Give the map a {color} {prop}.",
        "Style the {prop} with a {color} tone.",
        "Set {prop} to {color} on the map.",
        "Let's try a {color} {prop} color.",
        "Adjust the {prop} shade to {color}.",
    ],
    "Draw": [
        "Draw a {shape}{filler}!",
        "Draw a {shape}{filler}.",
        "Please draw a {shape}{filler}.",
        "Can you draw a {shape}{filler}?",
        "Sketch a {shape}{filler}.",
        "Trace a {shape}{filler}.",
        "Start drawing a {shape}{filler}.",
        "I'd like to draw a {shape}{filler}.",
        "Let me draw a {shape}{filler}.",
        "Time to draw a {shape}{filler}.",
        "Begin a {shape} drawing{filler}.",
        "Draw one {shape}{filler}.",
        "Activate {shape} drawing mode{filler}.",
        "Enter {shape} drawing mode{filler}.",
        "Switch to {shape} drawing{filler}.",
        "We should draw a {shape}{filler}.",
    ],
    "Move": [
        "Can we go to {x}, {y}?",
        "Move the map to {x}, {y}.",
        "Pan over to {x}, {y}, please.",
        "Center the view on {x}, {y}.",
        "Take me to {x}, {y}!",
        "Navigate to {x}, {y}.",
        "Jump to coordinates {x}, {y}.",
        "Recenter the map at {x}, {y}.",
        "Head over to {x}, {y}.",
        "Go to {x}, {y} now.",
        "Move over to {x}, {y} for a second.",
        "Please center on {x}, {y}.",
        "Pan the view to {x}, {y}.",
        "Let's go to {x}, {y}.",
        "Shift the map toward {x}, {y}.",
        "Scroll the map to {x}, {y}.",
    ],
    "MoveToExtent": [
        "Set map bounds from {a}, {b} to {c}, {d}.",
        "Fit the view to the box from {a}, {b} to {c}, {d}.",
        "Adjust the map extent from {a}, {b} to {c}, {d}.",
        "Frame the area between {a}, {b} and {c}, {d}.",
        "Set the visible extent from {a}, {b} to {c}, {d}, please.",
        "Restrict the view to bounds {a}, {b} to {c}, {d}.",
        "Show everything between {a}, {b} and {c}, {d}.",
        "Fit the map to the extent {a}, {b} to {c}, {d}.",
        "Make the viewport span {a}, {b} to {c}, {d}.",
        "Stretch the view from {a}, {b} out to {c}, {d}.",
        "Bound the map by {a}, {b} and {c}, {d}.",
        "I need the extent set from {a}, {b} to {c}, {d}.",
        "Display the bounding box {a}, {b} to {c}, {d}.",
        "Snap the view to bounds {a}, {b} through {c}, {d}.",
        "Set bounds: {a}, {b} to {c}, {d}.",
        "Zoom the map to the box from {a}, {b} to {c}, {d}.",
    ],
    "ZoomIn": [
        "Zoom in by {n} levels{suffix}.",
        "Zoom in {n} levels{suffix}.",
        "Zoom the map in by {n} levels{suffix}.",
        "Can you zoom in {n} levels{suffix}?",
        "Please zoom in by {n} levels{suffix}.",
        "I'd like to zoom in by {n} levels{suffix}.",
        "Zoom in by {n} steps{suffix}.",
        "Let's zoom in {n} levels{suffix}.",
        "Magnify the view by {n} levels{suffix}.",
        "Get closer by {n} zoom levels{suffix}.",
        "Zoom in another {n} levels{suffix}.",
        "Could you zoom in by {n}{suffix}?",
        "Zoom right in by {n} levels{suffix}.",
        "Move in closer by {n} levels{suffix}.",
        "Push the zoom in by {n} levels{suffix}.",
        "Zoom in: {n} levels{suffix}.",
    ],
    "ZoomOut": [
        "Zoom out by {n} levels{suffix}.",
        "I'd like to zoom out by {n} levels{suffix}.",
        "Zoom out {n} levels{suffix}.",
        "Zoom the map out by {n} levels{suffix}.",
        "Can you zoom out {n} levels{suffix}?",
        "Please zoom out by {n} levels{suffix}.",
        "Zoom out by {n} steps{suffix}.",
        "Let's zoom out {n} levels{suffix}.",
        "Back out by {n} zoom levels{suffix}.",
        "Pull the view back {n} zoom levels{suffix}.",
        "Widen the view by {n} zoom levels{suffix}.",
        "Zoom right out by {n} levels{suffix}.",
        "Zoom out: {n} levels{suffix}.",
        "Step the zoom out by {n} levels{suffix}.",
        "Reduce the zoom by {n} levels{suffix}.",
        "Zoom farther out by {n} levels{suffix}.",
    ],
}


def _coord_pair(rng: random.Random) -> tuple[str, str]:
    return (f"{rng.uniform(-180.0, 180.0):.4f}", f"{rng.uniform(-90.0, 90.0):.4f}")


def _render(function: str, rng: random.Random) -> tuple[str, GisCall]:
    template = rng.choice(TEMPLATES[function])
    if function == "AddMarker":
        label = rng.choice(MARKER_LABELS)
        x, y = _coord_pair(rng)
        query = template.format(label=label, x=x, y=y)
        call: GisCall = AddMarker(label, (NumberLiteral(x), NumberLiteral(y)))
    elif function == "AddLayer":
        name = rng.choice(LAYER_NAMES)
        query = template.format(name=name)
        call = AddLayer(name)
    elif function == "AddVector":
        geom = rng.choice(GEOMETRY_KINDS)
        file = f"{rng.choice(VECTOR_SLUGS)}.{rng.choice(VECTOR_EXTS)}"
        query = template.format(geom=geom, file=file)
        call = AddVector(GeometryKind.from_text(geom), file)
    elif function == "AddWMS":
        url = f"https://{rng.choice(WMS_HOSTS)}/wms"
        theme = rng.choice(WMS_THEMES)
        query = template.format(url=url, theme=theme)
        call = AddWMS(url)
    elif function == "Cartography":
        prop = rng.choice(CARTO_PROPERTIES)
        color = rng.choice(COLORS)
        query = template.format(prop=prop, color=color)
        call = Cartography(CartoProperty.from_text(prop), color, None)
    elif function == "Draw":
        shape = rng.choice(DRAW_SHAPES)
        filler = rng.choice(DRAW_FILLERS)
        query = template.format(shape=shape, filler=filler)
        call = Draw(DrawShape.from_text(shape))
    elif function == "Move":
        x, y = _coord_pair(rng)
        query = template.format(x=x, y=y)
        call = Move(NumberLiteral(x), NumberLiteral(y))
    elif function == "MoveToExtent":
        a, b = _coord_pair(rng)
        c, d = _coord_pair(rng)
        query = template.format(a=a, b=b, c=c, d=d)
        call = MoveToExtent(
            NumberLiteral(a), NumberLiteral(b), NumberLiteral(c), NumberLiteral(d)
        )
    elif function == "ZoomIn":
        n = rng.randint(1, 10)
        query = template.format(n=n, suffix=rng.choice(ZOOM_IN_SUFFIXES))
        call = ZoomIn(n)
    elif function == "ZoomOut":
        n = rng.randint(1, 10)
        query = template.format(n=n, suffix=rng.choice(ZOOM_OUT_SUFFIXES))
        call = ZoomOut(n)
    else:
        raise AssertionError(function)
    return query, call


# Retry budget per function, as a multiple of the requested sample count.
_RETRY_FACTOR = 50


def generate(seed: int, per_function: int = 200) -> list[Sample]:
    """Produce ``per_function`` unique samples for each of the ten functions.

    Resampling continues until queries are unique across the whole dataset;
    :class:`TemplateExhaustion` is raised if the retry budget runs out, which
    signals a template pool too small for the requested count.
    """
    if per_function < 1:
        raise ValueError("per_function must be >= 1")
    rng = random.Random(seed)
    samples: list[Sample] = []
    seen: set[str] = set()
    sample_id = 0
    for function in GIS_FUNCTIONS:
        produced = 0
        attempts = 0
        budget = per_function * _RETRY_FACTOR
        while produced < per_function:
            attempts += 1
            if attempts > budget:
                raise TemplateExhaustion(
                    f"could not produce {per_function} unique queries for "
                    f"{function} within {budget} attempts"
                )
            query, call = _render(function, rng)
            query = query.strip()
            if not query or query in seen:
                continue
            seen.add(query)
            samples.append(Sample(sample_id, function, query, serialize_call(call)))
            sample_id += 1
            produced += 1
    return samples


def split(
    samples: Sequence[Sample], spec: SplitSpec
) -> tuple[list[Sample], list[Sample], list[Sample]]:
    """Shuffle with the spec's seed and cut train / val / test partitions.

    The first ``train_fraction`` of the shuffle is the training set; the
    remainder is divided into validation and test by ``val_fraction_of_test``.
    Counts use round-half-up so the three parts always form a partition.
    """
    if not samples:
        raise ValueError("cannot split an empty dataset")
    shuffled = list(samples)
    random.Random(spec.seed).shuffle(shuffled)
    n_train = int(len(shuffled) * spec.train_fraction + 0.5)
    rest = shuffled[n_train:]
    n_val = int(len(rest) * spec.val_fraction_of_test + 0.5)
    return shuffled[:n_train], rest[:n_val], rest[n_val:]


# ---------------------------------------------------------------------------
# JSONL persistence
# ---------------------------------------------------------------------------

_FIELDS = ("id", "function", "query", "call")


def save_jsonl(samples: Iterable[Sample], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for s in samples:
            record = {"id": s.id, "function": s.function, "query": s.query, "call": s.call}
            fh.write(json.dumps(record, ensure_ascii=True, separators=(",", ":")))
            fh.write("\n")


def load_jsonl(path: str | Path) -> list[Sample]:
    """Read samples, validating every record's invariants as it goes."""
    samples: list[Sample] = []
    seen_queries: set[str] = set()
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise MalformedRecord(lineno, f"invalid JSON: {exc}") from None
            if not isinstance(record, dict):
                raise MalformedRecord(lineno, "record is not an object")
            for field in _FIELDS:
                if field not in record:
                    raise MalformedRecord(lineno, f"missing field {field!r}")
            if not isinstance(record["id"], int) or record["id"] < 0:
                raise MalformedRecord(lineno, "id must be a non-negative integer")
            if not all(isinstance(record[f], str) for f in ("function", "query", "call")):
                raise MalformedRecord(lineno, "function, query, call must be strings")
            query = record["query"]
            if not query.strip():
                raise MalformedRecord(lineno, "query is empty")
            if query in seen_queries:
                raise MalformedRecord(lineno, f"duplicate query: {query!r}")
            seen_queries.add(query)
            try:
                call = parse_call(record["call"])
            except ParseError as exc:
                raise InvalidCall(lineno, f"call does not parse: {exc}") from None
            if function_name(call) != record["function"]:
                raise InvalidCall(
                    lineno,
                    f"label {record['function']!r} does not match call "
                    f"{record['call']!r}",
                )
            samples.append(Sample(record["id"], record["function"], query, record["call"]))
    return samples
