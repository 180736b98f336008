"""Regenerates the fixture corpus and its frozen oracles.

Images are drawn at exactly 300x200 so no resampling happens before binning;
histograms are counted with a plain pixel loop.
"""
import json
import os

from PIL import Image, ImageDraw

HERE = os.path.dirname(os.path.abspath(__file__))
W, H = 300, 200

THEMES = {
    "ocean": {
        "colors": [(20, 40, 110), (40, 170, 190), (230, 210, 160), (245, 245, 240), (120, 180, 230)],
        "genre": "travel",
        "text": "Ocean waves on the beach this summer: sailing the coast, blue water, surf and an island vacation.",
    },
    "forest": {
        "colors": [(30, 90, 40), (90, 150, 60), (100, 70, 40), (150, 170, 90), (235, 230, 200)],
        "genre": "nature",
        "text": "A forest garden in spring. Green trees, hiking trails, fresh leaves and organic growth.",
    },
    "night": {
        "colors": [(15, 10, 30), (90, 30, 120), (240, 40, 150), (40, 230, 240), (70, 70, 80)],
        "genre": "music",
        "text": "Night city neon! Club music, electric dance party, urban lights and techno beats.",
    },
    "autumn": {
        "colors": [(210, 110, 30), (150, 60, 30), (200, 160, 40), (90, 50, 30), (240, 225, 200)],
        "genre": "food",
        "text": "Autumn harvest in October: pumpkin festival, warm cozy kitchen, rustic farm recipes and falling leaves.",
    },
    "winter": {
        "colors": [(250, 250, 250), (190, 220, 240), (180, 180, 190), (20, 30, 70), (180, 30, 40)],
        "genre": "sports",
        "text": "Winter snow in December. Holiday frost, cold ice, mountain skiing and a cozy cabin.",
    },
    "desert": {
        "colors": [(240, 200, 60), (200, 100, 60), (225, 195, 150), (110, 170, 220), (110, 70, 40)],
        "genre": "travel",
        "text": "Desert sun and heat: travel adventure across sand dunes, a dry canyon and warm wind.",
    },
}

# band heights per variant (sum 200)
VARIANTS = [(70, 50, 40, 25, 15), (30, 60, 35, 45, 30)]


def draw(colors, bands, variant):
    img = Image.new("RGB", (W, H))
    d = ImageDraw.Draw(img)
    y = 0
    for color, h in zip(colors, bands):
        d.rectangle([0, y, W - 1, y + h - 1], fill=color)
        y += h
    # a disc of the third color and a vertical stripe of the last
    cx = 80 if variant == 0 else 220
    d.ellipse([cx - 40, 60, cx + 40, 140], fill=colors[2])
    d.rectangle([150 + 20 * variant, 0, 169 + 20 * variant, H - 1], fill=colors[4])
    # a gentle horizontal ramp in the top band so neighbouring bins appear
    px = img.load()
    for yy in range(bands[0]):
        for xx in range(W):
            r, g, b = px[xx, yy]
            px[xx, yy] = (min(255, r + xx // 20), g, b)
    return img


def histogram(img):
    counts = [0] * 512
    px = img.load()
    for yy in range(img.height):
        for xx in range(img.width):
            r, g, b = px[xx, yy]
            counts[(r // 32) * 64 + (g // 32) * 8 + (b // 32)] += 1
    return counts


def main():
    corpus = os.path.join(HERE, "corpus")
    for sub in ("images", "transcripts", "histograms"):
        os.makedirs(os.path.join(corpus, sub), exist_ok=True)
    os.makedirs(os.path.join(HERE, "oracle"), exist_ok=True)

    entries, oracle = [], {}
    for name, theme in THEMES.items():
        for v, bands in enumerate(VARIANTS):
            doc = f"{name}-{v + 1}"
            img = draw(theme["colors"], bands, v)
            img.save(os.path.join(corpus, "images", f"{doc}.png"))
            with open(os.path.join(corpus, "transcripts", f"{doc}.txt"), "w") as f:
                f.write(theme["text"] + "\n")
            counts = histogram(img)
            oracle[doc] = {str(b): c for b, c in enumerate(counts) if c}
            entry = {
                "id": doc,
                "title": f"{name.title()} {v + 1}",
                "genre": theme["genre"],
                "transcript": f"transcripts/{doc}.txt",
                "categories": [theme["genre"]],
            }
            # one document ships a precomputed histogram instead of an image
            if doc == "desert-2":
                with open(os.path.join(corpus, "histograms", f"{doc}.csv"), "w") as f:
                    f.write(",".join(str(c) for c in counts) + "\n")
                entry["histogram"] = f"histograms/{doc}.csv"
            else:
                entry["image"] = f"images/{doc}.png"
            entries.append(entry)

    # a document whose transcript is all stop words; ingestion must drop it
    with open(os.path.join(corpus, "transcripts", "empty.txt"), "w") as f:
        f.write("The and of it was there, with them.\n")
    entries.append({"id": "empty", "title": "Empty", "genre": "", "image": "images/ocean-1.png",
                    "transcript": "transcripts/empty.txt", "categories": []})

    with open(os.path.join(corpus, "manifest.json"), "w") as f:
        json.dump({"entries": entries}, f, indent=2)
        f.write("\n")
    with open(os.path.join(HERE, "oracle", "histograms.json"), "w") as f:
        json.dump(oracle, f, indent=1, sort_keys=True)
        f.write("\n")

    # grayscale pattern for recoloring: five vertical bars of equal width
    pat = Image.new("L", (W, H))
    d = ImageDraw.Draw(pat)
    for i, level in enumerate((20, 75, 130, 185, 240)):
        d.rectangle([i * 60, 0, i * 60 + 59, H - 1], fill=level)
    d.ellipse([100, 50, 200, 150], fill=240)
    pat.save(os.path.join(HERE, "pattern.png"))


if __name__ == "__main__":
    main()
