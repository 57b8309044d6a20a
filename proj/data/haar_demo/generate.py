#!/usr/bin/env python3
"""Regenerates the synthetic HAAR refinement dataset in this directory.

One sample, 100 fixations on a 10 x 10 grid with 50-unit spacing. Each fixation
is 5 gaze points 30 ms apart at the cell centre (120 ms, zero dispersion).
Three AOI stages share a rect over rows 0-6 and grow a polygon over the rows
below it, so 77, 88 and 93 fixations land inside an AOI.
"""
import json
from pathlib import Path

HERE = Path(__file__).resolve().parent
SPACING = 50
POINTS_PER_FIXATION = 5
POINT_INTERVAL = 30
FIXATION_PERIOD = 200


def gaze_rows():
    rows = ["t\tx\ty"]
    for k in range(100):
        row, col = divmod(k, 10)
        cx = SPACING // 2 + SPACING * col
        cy = SPACING // 2 + SPACING * row
        for p in range(POINTS_PER_FIXATION):
            rows.append(f"{k * FIXATION_PERIOD + p * POINT_INTERVAL}\t{cx}\t{cy}")
    return "\n".join(rows) + "\n"


def aois(polygon):
    return [
        {"id": "content", "name": "Content", "precedence": 0, "gid": 1,
         "shape": {"type": "rect", "x": 0, "y": 0, "w": 500, "h": 350}},
        {"id": "refine", "name": "Refined region", "precedence": 1, "gid": 2,
         "shape": {"type": "polygon", "vertices": polygon}},
    ]


STAGES = {
    # row 7, columns 0-6
    "aois_stage1.json": [[0, 350], [350, 350], [350, 400], [0, 400]],
    # all of row 7, row 8 columns 0-7
    "aois_stage2.json": [[0, 350], [500, 350], [500, 400], [400, 400], [400, 450], [0, 450]],
    # rows 7-8, row 9 columns 0-2
    "aois_stage3.json": [[0, 350], [500, 350], [500, 450], [150, 450], [150, 500], [0, 500]],
}


def main():
    (HERE / "P01.tsv").write_text(gaze_rows())
    for name, polygon in STAGES.items():
        (HERE / name).write_text(json.dumps(aois(polygon), indent=2) + "\n")


if __name__ == "__main__":
    main()
