#!/usr/bin/env python3
"""Scripted walk through the human evaluation protocol.

Talks to the evaluation service the same way the browser UI does: create a
session, receive obfuscated sequences with blanks, submit answers, learn
from the revealed truth, and read the streak-based score.  Here the script
peeks at the service's ground truth to act as a perfect participant; a real
session is played at http://127.0.0.1:8000 after `wadebench serve`.
"""

from fastapi.testclient import TestClient

from wadebench.evalserve import create_app


def main():
    app = create_app(seed=42)
    client = TestClient(app)

    created = client.post("/session").json()
    sid = created["session_id"]
    session = app.state.sessions[sid]
    print(f"session {sid[:8]}..., task {session.task_id} "
          f"({len(created['hidden'])} blank(s) to fill)")
    print("first sequence as the participant sees it:")
    print("  ", " ".join(created["sequence"]))

    # one deliberate mistake, then a perfect streak of ten
    wrong = ["?" * 2 for _ in session.current.hidden]
    reply = client.post(f"/session/{sid}/answer", json={"answers": wrong}).json()
    print(f"\nwrong guess -> correct={reply['correct']}, streak={reply['streak']}, "
          f"revealed: {' '.join(reply['revealed'])[:80]}")

    for i in range(10):
        truth = [session.current.obfuscated[k] for k in session.current.hidden]
        reply = client.post(f"/session/{sid}/answer", json={"answers": truth}).json()
        print(f"question {i + 2}: correct={reply['correct']} "
              f"streak={reply['streak']} task_switched={reply['task_switched']}")

    score = client.get(f"/session/{sid}/score").json()
    print(f"\nscore: curve={score['curve']} wade={score['wade']:.4f}")
    print("(a 10-streak starting at question 2 scores 100% accuracy at step 2)")


if __name__ == "__main__":
    main()
