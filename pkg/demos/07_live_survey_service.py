"""Walk the survey HTTP API end to end, in process.

Boots the FastAPI survey app over a throwaway synthetic dataset and drives
it exactly as the browser UI does: create a session with demographics,
loop next-pair -> submit-choice, then read back rankings and the raw
event-log export, and finally prove the crash-safety property by
rebuilding the service state from the log alone.

(For a real deployment: `aesthia serve --dataset name=manifest.csv --port 8080`.)
"""

import tempfile
import warnings
from pathlib import Path

import numpy as np
from PIL import Image

warnings.filterwarnings("ignore", message="Using `httpx`")
from fastapi.testclient import TestClient  # noqa: E402

from aesthia import replay, service


def build_corpus(root: Path) -> Path:
    (root / "imgs").mkdir()
    rng = np.random.default_rng(3)
    lines = ["id,path,score,category"]
    for i in range(6):
        name = f"form{i}.png"
        Image.fromarray(rng.integers(0, 256, (32, 32)).astype(np.uint8)).save(root / "imgs" / name)
        lines.append(f"form{i},imgs/{name},,")
    manifest = root / "manifest.csv"
    manifest.write_text("\n".join(lines) + "\n")
    return manifest


def main():
    with tempfile.TemporaryDirectory() as tmp:
        root = Path(tmp)
        config = service.SurveyConfig(
            datasets={"demo": build_corpus(root)},
            log_path=root / "events.jsonl",
            rng_seed=99,
        )
        client = TestClient(service.create_app(config))

        session = client.post(
            "/api/sessions",
            json={"age_range": "25-34", "gender": "undisclosed", "expertise": "novice"},
        ).json()
        print("session token:", session["session_id"])

        rng = np.random.default_rng(0)
        for k in range(25):
            nxt = client.get(f"/api/sessions/{session['session_id']}/next").json()
            if k < 3:
                print(f"  pair {nxt['left_url']} vs {nxt['right_url']}: {nxt['prompt_text']}")
            outcome = ("left", "right", "tie")[int(rng.integers(3))]
            client.post(
                f"/api/comparisons/{nxt['comparison_id']}",
                json={"outcome": outcome, "duration_ms": int(rng.integers(800, 9000))},
            )

        print("\nrankings (aesthetic, no RD filter):")
        body = client.get("/api/rankings", params={"dataset": "demo"}).json()
        for row in body["rankings"]:
            print(
                f"   {row['image_id']}: rating {row['rating']:7.1f}, "
                f"rd {row['rd']:5.1f}, matches {row['matches']}"
            )

        exported = client.get("/api/export").text.splitlines()
        print(f"\nexported {len(exported)} events; replay(export) == live table:",
              replay(exported) == client.app.state.survey.table)

        revived = service.SurveyState(config)
        print("state rebuilt from log equals live table:",
              revived.table == client.app.state.survey.table)


if __name__ == "__main__":
    main()
