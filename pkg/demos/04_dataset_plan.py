"""
Data-collection planning
========================

The photo schedule shifts a 63-piece layout across the board, rotating the
round-symmetric pieces in between shots, so a handful of physical setups
yields labeled crops of every piece on (almost) every square.
"""

from chessarm.board import parse_fen
from chessarm.perception import (
    DEFAULT_BASE_FEN,
    build_training_splits,
    generate_dataset_plan,
)

base = parse_fen(DEFAULT_BASE_FEN, mode="placement")
manifest = generate_dataset_plan(base)

############################################################
# The schedule: 8 column positions x 4 row positions x 5 orientations.

print(f"images: {len(manifest.images)}")
print("first few:", ", ".join(e.name for e in manifest.images[:6]))
for name, specs in sorted(manifest.crop_sets.items()):
    print(f"crop set {name}: {len(specs):>5} sub-images")

############################################################
# Row translations accumulate physically, so odd column positions carry a
# four-rank offset; that is exactly what makes the coverage work out.

c0r1 = next(e for e in manifest.images if e.name == "img_C0_R1_r0")
c1r0 = next(e for e in manifest.images if e.name == "img_C1_R0_r0")
print("label of img_C0_R1_r0:", c0r1.label_fen)
print("label of img_C1_R0_r0:", c1r0.label_fen)

report = manifest.coverage("D")
print(f"covered (label, square) pairs: {report['covered']}")
print(f"uncovered: {len(report['missing'])} -- all are the 'empty' label, "
      "traceable to the one absent rook")

############################################################
# Training splits draw one sample per piece from the key squares and divide
# the rest 20:80 into validation and test.

for key_squares, composition in (("3x3", "d"), ("4x4", "d"), ("4x4", "d+rr")):
    splits = build_training_splits(manifest, key_squares, composition, seed=7)
    print(
        f"{key_squares}/{composition}: train={len(splits['train']['samples'])} "
        f"val={len(splits['val']['samples'])} test={len(splits['test']['samples'])}"
    )
