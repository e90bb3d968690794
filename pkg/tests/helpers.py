"""Record builders shared by the test modules."""


def topic(uri, parents=(), labels=None, definitions=None):
    return {
        "uri": uri,
        "kind": "topic",
        "labels": labels if labels is not None else [{"lang": "en", "text": uri, "preferred": True}],
        "parents": list(parents),
        "definitions": list(definitions or []),
    }


def process(uri, labels=None):
    return {
        "uri": uri,
        "kind": "process",
        "labels": labels if labels is not None else [{"lang": "en", "text": uri, "preferred": True}],
    }


def competency(uri, proc, ingredients, labels=None):
    return {
        "uri": uri,
        "kind": "competency",
        "labels": labels if labels is not None else [{"lang": "en", "text": uri, "preferred": True}],
        "process": proc,
        "ingredient_topics": list(ingredients),
    }


def level(uri, region=None, age_min=None, age_max=None, labels=None):
    return {
        "uri": uri,
        "kind": "level",
        "labels": labels if labels is not None else [{"lang": "en", "text": uri, "preferred": True}],
        "region": region,
        "age_min": age_min,
        "age_max": age_max,
    }


def resource(rid, annotations, titles=None, body=None):
    return {
        "id": rid,
        "titles": titles or {"en": rid},
        "body": body or {},
        "annotations": list(annotations),
    }
