#!/usr/bin/env python3
"""Regenerate the committed fixture corpus under fixtures/.

The fixture models a small slice of a learning-resource platform: a
geometry/statistics ontology (42 terms), 56 annotated resources, a few
expert-authored relatedness edges, and a pre-seeded definition cache so
the whole pipeline runs offline. Everything is literal and deterministic;
running this script twice produces byte-identical files.

After writing, the script rebuilds everything in a scratch copy and
checks the structural facts the test suite and the demo rely on (the
"circ" autocomplete cluster, the ellipse suggestion chips, the merged
pie chart edge, nonzero counts). A failed check aborts with a message
instead of committing a broken fixture.
"""

from __future__ import annotations

import json
import os
import shutil
import sys
import tempfile

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from topictrap.autocomplete import complete
from topictrap.config import load_config
from topictrap.corpus import DefinitionCache
from topictrap.index import search
from topictrap.pipeline import load_runtime, run_build_corpus, run_build_index, run_build_relatives
from topictrap.relatedness import MANUAL_CLASS
from topictrap.suggest import suggest

FIXTURES = os.path.join(os.path.dirname(__file__), "..", "fixtures")
FETCHED_AT = "2026-01-01T00:00:00Z"


# --- ontology --------------------------------------------------------------

def _labels(en=None, fr=None, de=None, alts=()):
    out = []
    for lang, text in (("en", en), ("fr", fr), ("de", de)):
        if text:
            out.append({"lang": lang, "text": text, "preferred": True})
    for lang, text in alts:
        out.append({"lang": lang, "text": text, "preferred": False})
    return out


def topic(uri, parents=(), defs=(), **langs):
    record = {"uri": uri, "kind": "topic", "labels": _labels(**langs)}
    if parents:
        record["parents"] = list(parents)
    if defs:
        record["definitions"] = [
            {"lang": lang, "url": f"https://{lang}.wikipedia.org/wiki/{page}"}
            for lang, page in defs
        ]
    return record


TERMS = [
    topic("geometry", en="Geometry", fr="Géométrie", de="Geometrie"),
    topic("plane_geometry", ["geometry"],
          en="Plane geometry", fr="Géométrie plane", de="Ebene Geometrie"),
    topic("solid_geometry", ["geometry"],
          en="Solid geometry", fr="Géométrie dans l'espace", de="Raumgeometrie"),
    topic("circle", ["plane_geometry"],
          defs=[("en", "Circle"), ("fr", "Cercle"), ("de", "Kreis")],
          en="Circle", fr="Cercle", de="Kreis"),
    topic("circumcircle", ["circle", "triangle"],
          defs=[("en", "Circumscribed_circle"), ("de", "Umkreis")],
          en="Circumcircle", fr="Cercle circonscrit", de="Umkreis",
          alts=[("en", "Circumscribed circle")]),
    topic("triangle", ["plane_geometry"],
          defs=[("en", "Triangle"), ("fr", "Triangle"), ("de", "Dreieck")],
          en="Triangle", fr="Triangle", de="Dreieck"),
    topic("right_triangle", ["triangle"],
          en="Right triangle", fr="Triangle rectangle", de="Rechtwinkliges Dreieck"),
    topic("equilateral_triangle", ["triangle"],
          en="Equilateral triangle", fr="Triangle équilatéral", de="Gleichseitiges Dreieck"),
    topic("quadrilateral", ["plane_geometry"],
          en="Quadrilateral", fr="Quadrilatère", de="Viereck"),
    topic("square", ["quadrilateral"], en="Square", fr="Carré", de="Quadrat"),
    topic("rectangle", ["quadrilateral"], en="Rectangle", fr="Rectangle", de="Rechteck"),
    topic("polygon", ["plane_geometry"], en="Polygon", fr="Polygone", de="Vieleck"),
    topic("conic_sections", ["plane_geometry"],
          defs=[("en", "Conic_section")],
          en="Conic sections", fr="Coniques", de="Kegelschnitte"),
    topic("ellipse", ["conic_sections"],
          defs=[("en", "Ellipse"), ("fr", "Ellipse")],
          en="Ellipse", fr="Ellipse", de="Ellipse"),
    topic("parabola", ["conic_sections"],
          defs=[("en", "Parabola")],
          en="Parabola", fr="Parabole", de="Parabel"),
    # deliberately left without resources: exercises zero-count handling
    topic("hyperbola", ["conic_sections"], en="Hyperbola", fr="Hyperbole", de="Hyperbel"),
    topic("disc", ["plane_geometry"],
          defs=[("en", "Disk_(mathematics)"), ("fr", "Disque_(géométrie)")],
          en="Disc", fr="Disque", de="Kreisscheibe", alts=[("en", "Disk")]),
    topic("perpendicular_bisector", ["plane_geometry"],
          en="Perpendicular bisector", fr="Médiatrice", de="Mittelsenkrechte"),
    topic("angle", ["plane_geometry"], en="Angle", fr="Angle", de="Winkel"),
    topic("cone", ["solid_geometry"],
          defs=[("en", "Cone")], en="Cone", fr="Cône", de="Kegel"),
    topic("sphere", ["solid_geometry"],
          defs=[("en", "Sphere")], en="Sphere", fr="Sphère", de="Kugel"),
    topic("cylinder", ["solid_geometry"], en="Cylinder", fr="Cylindre", de="Zylinder"),
    topic("meridian", ["sphere"],
          defs=[("en", "Meridian_(geography)")],
          en="Meridian", fr="Méridien", de="Meridian"),
    topic("statistics", en="Statistics", fr="Statistique", de="Statistik"),
    topic("statistical_diagram", ["statistics"],
          en="Statistical diagram", fr="Diagramme statistique", de="Statistisches Diagramm"),
    topic("circular_diagram", ["statistical_diagram"],
          defs=[("en", "Circular_diagram"), ("de", "Kreisdiagramm")],
          en="Circular diagram", fr="Diagramme circulaire", de="Kreisdiagramm"),
    # near-duplicate of circular_diagram; the manual edge below ties them
    topic("pie_chart", ["circular_diagram"],
          defs=[("en", "Pie_chart")],
          en="Pie chart", fr="Camembert", de="Tortendiagramm"),
    topic("bar_chart", ["statistical_diagram"],
          en="Bar chart", fr="Diagramme en barres", de="Balkendiagramm"),
    topic("histogram", ["statistical_diagram"],
          en="Histogram", fr="Histogramme", de="Histogramm"),
    topic("numbers", en="Numbers and quantities", fr="Nombres et grandeurs",
          de="Zahlen und Größen"),
    topic("rational_number", ["numbers"],
          en="Rational number", fr="Nombre rationnel", de="Rationale Zahl"),
    topic("proportionality", ["numbers"],
          en="Proportionality", fr="Proportionnalité", de="Proportionalität"),
    topic("measure", ["numbers"],
          en="Measure", fr="Mesure", de="Messgröße", alts=[("en", "Measurement")]),
    topic("intercept_theorem", ["triangle", "proportionality"],
          defs=[("en", "Intercept_theorem")],
          en="Intercept theorem", fr="Théorème de Thalès", de="Strahlensatz",
          alts=[("en", "Thales' theorem")]),
    {
        "uri": "use_in_calculating_magnitudes", "kind": "process",
        "labels": _labels(en="Use in calculating magnitudes",
                          fr="Utiliser pour calculer des grandeurs",
                          de="Zur Größenberechnung verwenden"),
    },
    {
        "uri": "construct", "kind": "process",
        "labels": _labels(en="Construct", fr="Construire", de="Konstruieren"),
    },
    {
        "uri": "comp_use_intercept_theorem", "kind": "competency",
        "labels": _labels(en="Use the intercept theorem in calculating magnitudes",
                          fr="Utiliser le théorème de Thalès pour calculer des grandeurs",
                          de="Den Strahlensatz zur Größenberechnung verwenden"),
        "process": "use_in_calculating_magnitudes",
        "ingredient_topics": ["intercept_theorem", "rational_number", "measure",
                              "proportionality"],
    },
    {
        "uri": "comp_construct_circumcircle", "kind": "competency",
        "labels": _labels(en="Construct the circumcircle of a triangle",
                          fr="Construire le cercle circonscrit d'un triangle",
                          de="Den Umkreis eines Dreiecks konstruieren"),
        "process": "construct",
        "ingredient_topics": ["circumcircle", "perpendicular_bisector"],
    },
    {
        "uri": "level_fr_cm1", "kind": "level",
        "labels": _labels(en="CM1 (France)", fr="CM1"),
        "region": "FR", "age_min": 9, "age_max": 10,
    },
    {
        "uri": "level_fr_cm2", "kind": "level",
        "labels": _labels(en="CM2 (France)", fr="CM2"),
        "region": "FR", "age_min": 10, "age_max": 11,
    },
    {
        "uri": "level_fr_6e", "kind": "level",
        "labels": _labels(en="Sixième (France)", fr="Sixième"),
        "region": "FR", "age_min": 11, "age_max": 12,
    },
    {
        "uri": "level_de_sek1", "kind": "level",
        "labels": _labels(en="Secondary level I (Germany)", de="Sekundarstufe I"),
        "region": "DE", "age_min": 10, "age_max": 15,
    },
]


# --- resources --------------------------------------------------------------

def res(rid, title_en, annotations, body_en, fr=None, de=None):
    titles = {"en": title_en}
    body = {"en": body_en}
    if fr:
        titles["fr"] = fr[0]
        body["fr"] = fr[1]
    if de:
        titles["de"] = de[0]
        body["de"] = de[1]
    return {"id": rid, "titles": titles, "body": body, "annotations": annotations}


RESOURCES = [
    res("r01", "Circle basics", ["circle"],
        "Introduction to the circle: centre, radius and diameter, with simple drawing exercises."),
    res("r02", "Radius and diameter practice", ["circle"],
        "Worksheet relating radius, diameter and circumference of a circle."),
    res("r03", "Circle area applet", ["circle"],
        "Interactive applet showing how the area of a circle grows with its radius."),
    res("r04", "Constructing the circumcircle", ["circumcircle"],
        "Step by step construction of the circumcircle of an acute triangle with compass and straightedge.",
        de=("Konstruktion des Umkreises",
            "Schrittweise Konstruktion des Umkreises eines Dreiecks mit Zirkel und Lineal.")),
    res("r05", "Circumcircle explorer", ["circumcircle"],
        "Drag the corner points of a triangle and watch its circumscribed circle follow."),
    res("r06", "Triangle gallery", ["triangle"],
        "Pictures and names of triangle families: acute, right and obtuse."),
    res("r07", "Triangle inequality lab", ["triangle"],
        "Experiment that tests which side lengths can actually form a triangle."),
    res("r08", "Right triangle worksheet", ["right_triangle"],
        "A right triangle contains one right angle of ninety degrees; practice finding the hypotenuse."),
    res("r09", "Pythagoras puzzle", ["right_triangle"],
        "Puzzle proof of the Pythagorean relation in a right triangle."),
    res("r10", "Equilateral triangle origami", ["equilateral_triangle"],
        "Folding an equilateral triangle from a square sheet of paper."),
    res("r11", "Quadrilateral sorting game", ["quadrilateral"],
        "Sort quadrilaterals by their side and angle properties."),
    res("r12", "Square tiling patterns", ["square"],
        "Tiling the plane with squares and counting the resulting patterns."),
    res("r13", "Perimeter of squares", ["square"],
        "Exercises on the perimeter and area of squares with integer sides."),
    res("r14", "Rectangle area cards", ["rectangle"],
        "Card game matching rectangles to their areas."),
    res("r15", "Polygon angle sums", ["polygon"],
        "Derive the interior angle sum formula for a polygon with any number of sides."),
    res("r16", "Conic sections overview", ["conic_sections"],
        "Survey of the conic sections: how slicing a cone yields circle, ellipse, parabola and hyperbola."),
    res("r17", "Ellipse drawing with string", ["ellipse"],
        "Draw an ellipse with two pins and a loop of string, then mark its focal points."),
    res("r18", "Planetary orbits applet", ["ellipse"],
        "Simulation showing planets moving on elliptical orbits around the sun."),
    res("r19", "Parabola in flight", ["parabola"],
        "Video analysis of a thrown ball tracing a parabola."),
    res("r20", "Disc area by slicing", ["disc"],
        "Cut a disc into sectors and rearrange them to approximate its area.",
        fr=("Aire du disque par découpage",
            "Découper un disque en secteurs pour retrouver la formule de son aire.")),
    res("r21", "Perpendicular bisector tool", ["perpendicular_bisector"],
        "Construct the perpendicular bisector of a segment with compass and ruler."),
    res("r22", "Angle measurement intro", ["angle"],
        "First steps of angle measurement with a protractor."),
    res("r23", "Angle hunting photos", ["angle"],
        "Find and classify angles hidden in photographs of buildings."),
    res("r24", "Cone volume experiment", ["cone"],
        "Fill a cone with sand to compare its volume with a cylinder of equal base."),
    res("r25", "Sphere geometry quiz", ["sphere"],
        "Quiz on great circles, radius and surface of a sphere."),
    res("r26", "Cylinder nets workshop", ["cylinder"],
        "Unfold a cylinder into its net and compute its surface."),
    res("r27", "Meridians on the globe", ["meridian"],
        "Locate meridians on a globe and measure longitude differences."),
    res("r28", "What is statistics", ["statistics"],
        "Gentle introduction to statistics with everyday data."),
    res("r29", "Choosing the right diagram", ["statistical_diagram"],
        "Guide for picking a suitable statistical diagram for a given data set."),
    res("r30", "Circular diagram reading", ["circular_diagram"],
        "Read shares of a whole from a circular diagram."),
    res("r31", "Pie chart builder", ["pie_chart"],
        "Build a pie chart from a table of class survey data."),
    res("r32", "Pie chart pitfalls", ["pie_chart"],
        "Common mistakes when reading pie charts, with corrected examples."),
    res("r33", "Budget pie chart activity", ["pie_chart"],
        "Turn a class budget table into a pie chart.",
        fr=("Camembert du budget de classe",
            "Construire un camembert à partir du budget de la classe.")),
    res("r34", "Bar chart race", ["bar_chart"],
        "Animated bar chart comparing monthly rainfall across cities."),
    res("r35", "Histogram of heights", ["histogram"],
        "Collect pupil heights and draw the histogram."),
    res("r36", "Numbers everywhere", ["numbers"],
        "Where numbers and quantities appear in daily life."),
    res("r37", "Rational number line", ["rational_number"],
        "Place rational numbers on the number line."),
    res("r38", "Fraction to decimal drill", ["rational_number"],
        "Convert between fraction and decimal form of rational numbers."),
    res("r39", "Proportionality tables", ["proportionality"],
        "Fill in proportionality tables and spot the constant ratio."),
    res("r40", "Scale models project", ["proportionality"],
        "Build a scale model of the classroom using a fixed ratio."),
    res("r41", "Units of measure memo", ["measure"],
        "Reference sheet for common units of measure and their conversions."),
    res("r42", "Intercept theorem visual proof", ["intercept_theorem"],
        "Dynamic figure showing why parallel lines cut transversals in equal ratios."),
    res("r43", "Thales in the schoolyard", ["intercept_theorem"],
        "Measure the height of a tree with the intercept theorem and a mirror.",
        fr=("Thalès dans la cour",
            "Mesurer la hauteur d'un arbre avec le théorème de Thalès.")),
    res("r44", "Estimating heights worksheet", ["use_in_calculating_magnitudes"],
        "Worksheet on using known ratios in calculating real world magnitudes."),
    res("r45", "Compass constructions course", ["construct"],
        "Course module on classical compass and straightedge constructions."),
    res("r46", "Shadow measuring field day", ["comp_use_intercept_theorem"],
        "Field activity: use the intercept theorem to calculate the height of the flag pole from shadows."),
    res("r47", "Circumcircle construction test", ["comp_construct_circumcircle"],
        "Assessment: construct the circumcircle of a given triangle and justify each step."),
    res("r48", "Plane geometry start page", ["plane_geometry"],
        "Entry point collecting the plane geometry activities."),
    res("r49", "Solid geometry start page", ["solid_geometry"],
        "Entry point collecting the solid geometry activities."),
    res("r50", "Geometry curriculum map", ["geometry"],
        "Overview map of the geometry strand across the school years."),
    res("r51", "CM1 geometry booklet", ["level_fr_cm1", "circle"],
        "Geometry exercise booklet for the CM1 class.",
        fr=("Livret de géométrie CM1",
            "Exercices de géométrie pour la classe de CM1.")),
    res("r52", "CM2 measurement booklet", ["level_fr_cm2", "measure"],
        "Quantities and measurement booklet for the CM2 class.",
        fr=("Livret grandeurs et mesures CM2",
            "Livret d'exercices sur les grandeurs et mesures pour le CM2.")),
    res("r53", "Sixième proportionality pack", ["level_fr_6e", "proportionality"],
        "Proportionality exercises for the sixième class.",
        fr=("Dossier proportionnalité sixième",
            "Exercices de proportionnalité pour la classe de sixième.")),
    res("r54", "Sekundarstufe I geometry plan", ["level_de_sek1", "geometry"],
        "Geometry teaching plan for German lower secondary school.",
        de=("Geometrieplan Sekundarstufe I",
            "Stoffverteilungsplan Geometrie für die Sekundarstufe I.")),
    res("r55", "Protractor practice", ["angle", "measure"],
        "Measuring angles with a protractor, reading the scale to the nearest degree."),
    res("r56", "Circle and disc poster", ["circle", "disc"],
        "Classroom poster contrasting the circle curve with the filled disc."),
]


# --- expert edges -----------------------------------------------------------

MANUAL_EDGES = [
    {"a": "circular_diagram", "b": "pie_chart", "similarity": 1.0},
    {"a": "ellipse", "b": "cone", "similarity": 0.95},
    {"a": "ellipse", "b": "meridian", "similarity": 0.75},
    {"a": "circumcircle", "b": "perpendicular_bisector", "similarity": 0.8},
]


# --- definition cache -------------------------------------------------------
# Texts are hand-written stand-ins for cleaned wiki sections. The en
# ellipse/disc pair shares enough rare vocabulary (region, shape,
# boundary, closed, curve) that the reduced-space similarity clears the
# 0.25 edge threshold; the self check below verifies that numerically.

DEFINITIONS = [
    ("circle", "en",
     "A circle is the plane closed curve formed by all points lying at one fixed "
     "distance, the radius, from a centre point. Circles bound round regions and "
     "appear everywhere in geometry."),
    ("disc", "en",
     "A disc is the plane region bounded by a circle, the round closed shape that "
     "contains the boundary curve together with every interior point."),
    ("ellipse", "en",
     "An ellipse is a plane closed curve surrounding two focal points, a round oval "
     "shape whose region looks like a stretched circle with a smooth boundary."),
    ("cone", "en",
     "A cone is a solid figure that tapers from a flat round base to a single apex "
     "point. Cutting a cone with a tilted plane yields an oval section."),
    ("sphere", "en",
     "A sphere is the solid figure whose surface consists of all points at the same "
     "distance from a centre, the perfectly round body of space."),
    ("triangle", "en",
     "A triangle is a polygon with three sides, three corner points and three "
     "interior angles that always add up to two right angles."),
    ("circumcircle", "en",
     "The circumcircle of a triangle is the circle that passes through its three "
     "corner points. Its centre sits where the perpendicular bisectors of the sides "
     "cross."),
    ("pie_chart", "en",
     "A pie chart shows how a whole quantity splits into parts: each share becomes a "
     "slice of a round diagram, with the slice angle proportional to the share."),
    ("circular_diagram", "en",
     "A circular diagram presents the parts of a whole quantity as sectors of a "
     "round diagram, each sector angle drawn proportional to its share."),
    ("meridian", "en",
     "A meridian is half of a great circle drawn on a globe from pole to pole, "
     "crossing the equator at a right angle."),
    ("parabola", "en",
     "A parabola is the plane curve traced by points that stay equally distant from "
     "one focal point and a straight guide line called the directrix."),
    ("conic_sections", "en",
     "The conic sections arise by cutting a double cone with a plane: depending on "
     "the tilt the section is a circle, an ellipse, a parabola or a hyperbola."),
    ("intercept_theorem", "en",
     "The intercept theorem states that two parallel lines cut a pair of "
     "transversals through one point in segments with equal ratios."),
    ("circle", "fr",
     "Un cercle est la courbe plane fermée formée de tous les points situés à la "
     "même distance d'un centre; cette distance est le rayon."),
    ("ellipse", "fr",
     "Une ellipse est une courbe plane fermée autour de deux foyers, une forme "
     "ovale arrondie dont la région ressemble à un cercle étiré."),
    ("disc", "fr",
     "Un disque est la région plane bordée par un cercle, la forme arrondie fermée "
     "qui contient la courbe frontière et tous les points intérieurs."),
    ("triangle", "fr",
     "Un triangle est un polygone à trois côtés, trois sommets et trois angles "
     "intérieurs."),
    ("circle", "de",
     "Ein Kreis ist die ebene geschlossene Kurve aller Punkte, die von einem "
     "Mittelpunkt denselben Abstand haben; dieser Abstand heißt Radius."),
    ("circumcircle", "de",
     "Der Umkreis eines Dreiecks ist der Kreis durch seine drei Eckpunkte; sein "
     "Mittelpunkt liegt im Schnittpunkt der Mittelsenkrechten und hat von allen "
     "Eckpunkten denselben Abstand."),
    ("circular_diagram", "de",
     "Ein Kreisdiagramm stellt die Teile eines Ganzen als Sektoren eines Kreises "
     "dar; jeder Winkel ist dem Anteil proportional."),
    ("triangle", "de",
     "Ein Dreieck ist ein Vieleck mit drei Seiten, drei Eckpunkten und drei "
     "Innenwinkeln."),
]

CONFIG = {
    "paths": {
        "ontology": "ontology.jsonl",
        "resources": "resources.jsonl",
        "cache_dir": "cache",
        "index_dir": "index",
        "manual_edges": "manual_edges.jsonl",
    },
    "languages": ["en", "fr", "de"],
    "fetch_mode": "offline",
}


def _jsonl(records, path):
    lines = [json.dumps(r, ensure_ascii=False, sort_keys=True) for r in records]
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def _def_url(terms, uri, lang):
    for record in terms:
        if record["uri"] != uri:
            continue
        for d in record.get("definitions", ()):
            if d["lang"] == lang:
                return d["url"]
    raise SystemExit(f"no definition ref for ({uri}, {lang}) in the term table")


def write_fixtures(root):
    os.makedirs(root, exist_ok=True)
    _jsonl(sorted(TERMS, key=lambda r: r["uri"]), os.path.join(root, "ontology.jsonl"))
    _jsonl(sorted(RESOURCES, key=lambda r: r["id"]), os.path.join(root, "resources.jsonl"))
    _jsonl(MANUAL_EDGES, os.path.join(root, "manual_edges.jsonl"))

    cache_dir = os.path.join(root, "cache")
    if os.path.isdir(cache_dir):
        shutil.rmtree(cache_dir)
    cache = DefinitionCache(cache_dir)
    for uri, lang, text in DEFINITIONS:
        cache.put(uri, lang, _def_url(TERMS, uri, lang), text, fetched_at=FETCHED_AT)

    with open(os.path.join(root, "config.json"), "w", encoding="utf-8") as fh:
        json.dump(CONFIG, fh, ensure_ascii=False, indent=2, sort_keys=True)
        fh.write("\n")


# --- self check -------------------------------------------------------------

def _check(condition, message):
    if not condition:
        raise SystemExit(f"fixture self check failed: {message}")


def self_check(root):
    """Build everything in a scratch copy and verify the facts the tests
    and the demo lean on."""
    with tempfile.TemporaryDirectory() as tmp:
        work = os.path.join(tmp, "fixtures")
        shutil.copytree(root, work)
        cfg = load_config(os.path.join(work, "config.json"))
        _, failures = run_build_corpus(cfg)
        _check(not failures, f"offline corpus build reported failures: {failures}")
        _, skips = run_build_relatives(cfg)
        _check(not skips, f"lsa skipped languages: {skips}")
        digest = run_build_index(cfg)
        rt = load_runtime(cfg)

        _check(len(rt.ontology) >= 30, f"only {len(rt.ontology)} terms")
        _check(len(rt.ix.resources) >= 50, f"only {len(rt.ix.resources)} resources")

        # the demo's typeahead cluster
        hits = complete(rt.acx, "circ", "en")
        _check(len(hits) >= 3, f"'circ' only matched {len(hits)} entries")
        _check(all(e.count >= 1 for e in hits), "autocomplete emitted a zero count")
        _check(not any(e.uri == "hyperbola" for e in complete(rt.acx, "hyp", "en")),
               "zero-count term leaked into autocomplete")

        # every emitted count must equal the search total it leads to
        for e in hits:
            total = search(rt.ix, rt.ontology, term=e.uri, lang="en").total
            _check(total == e.count, f"{e.uri}: count {e.count} vs total {total}")

        # one-click escape hatches from the ellipse page
        chips = {s.uri: s for s in suggest(rt.graph, rt.ix, rt.ontology, "ellipse", "en")}
        for expected in ("cone", "conic_sections", "disc", "meridian"):
            _check(expected in chips, f"ellipse suggestions miss {expected}")
        _check(chips["disc"].kind.wire == "lsa:en", "ellipse-disc did not come from lsa")

        # the expert edge outranks and silences the structural one
        merged = rt.graph.pair_edges("circular_diagram", "pie_chart")
        _check(len(merged) == 1 and merged[0].kind.precedence_class == MANUAL_CLASS,
               f"pie chart pair not reduced to the manual edge: {merged}")
        _check(rt.graph.effective_similarity("circular_diagram", "pie_chart") == 1.0,
               "pie chart pair lost its 1.0 similarity")
        top = suggest(rt.graph, rt.ix, rt.ontology, "pie_chart", "en")[0]
        _check(top.uri == "circular_diagram" and top.similarity == 1.0,
               f"pie chart's first suggestion is {top}")

        # a competency suggests its process and all four ingredients
        comp = {s.uri for s in suggest(rt.graph, rt.ix, rt.ontology,
                                       "comp_use_intercept_theorem", "en")}
        needed = {"use_in_calculating_magnitudes", "intercept_theorem",
                  "rational_number", "measure", "proportionality"}
        _check(needed <= comp, f"competency suggestions miss {needed - comp}")

        counts = {u: c for u, c in rt.ix.counts.items() if c == 0}
        _check(set(counts) == {"hyperbola"}, f"unexpected zero-count terms: {counts}")

        print(f"self check ok: build {digest}, {len(rt.ontology)} terms, "
              f"{len(rt.ix.resources)} resources, {len(rt.graph.pairs)} related pairs")


def main():
    root = os.path.abspath(FIXTURES)
    write_fixtures(root)
    self_check(root)
    print(f"fixtures written to {root}")


if __name__ == "__main__":
    main()
