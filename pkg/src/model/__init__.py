from src.model.aut import aut_dumps, aut_loads, aut_read, aut_write
from src.model.labels import TAU, TERMINATED, Label, make_label, render_label
from src.model.lts import Lts

__all__ = [
    "Label",
    "Lts",
    "TAU",
    "TERMINATED",
    "aut_dumps",
    "aut_loads",
    "aut_read",
    "aut_write",
    "make_label",
    "render_label",
]
