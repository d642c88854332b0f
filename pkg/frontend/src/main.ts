/**
 * Wires the view-model to the service and the DOM.
 *
 * The session id and the currently served question live in sessionStorage
 * so a reload resumes where the participant left off; streaks and scores
 * are always the service's, re-fetched rather than recomputed.
 */

import * as api from './api.js';
import * as state from './state.js';
import { render } from './ui.js';

const STORAGE_KEY = 'wadebench-session';

let view: state.SessionView | null = null;

function root(): HTMLElement {
    return document.getElementById('app') as HTMLElement;
}

function persist(): void {
    if (view !== null) {
        sessionStorage.setItem(STORAGE_KEY, JSON.stringify({
            session_id: view.sessionId,
            sequence: view.sequence,
            hidden: view.hidden,
        }));
    }
}

function draw(): void {
    if (view !== null) {
        render(root(), view, handlers);
    }
}

async function startSession(): Promise<void> {
    try {
        view = state.newSession(await api.createSession());
    } catch (err) {
        if (view !== null) {
            view = state.setError(view, String(err));
        } else {
            root().textContent = `cannot reach the evaluation service: ${err}`;
            return;
        }
    }
    persist();
    draw();
}

async function submit(): Promise<void> {
    if (view === null || !state.canSubmit(view)) {
        return;
    }
    try {
        const reply = await api.submitAnswers(view.sessionId, view.inputs);
        view = state.applyAnswer(view, reply);
        if (view.completed) {
            view = state.applyScore(view, await api.fetchScore(view.sessionId));
        }
    } catch (err) {
        view = state.setError(view, String(err));
    }
    persist();
    draw();
}

const handlers = {
    onInput(slot: number, value: string): void {
        if (view !== null) {
            view = state.setInput(view, slot, value);
            const button = document.querySelector('button.submit') as HTMLButtonElement;
            if (button) {
                button.disabled = !state.canSubmit(view);
            }
        }
    },
    onSubmit(): void {
        void submit();
    },
    onNewSession(): void {
        sessionStorage.removeItem(STORAGE_KEY);
        void startSession();
    },
};

function resume(): boolean {
    const saved = sessionStorage.getItem(STORAGE_KEY);
    if (saved === null) {
        return false;
    }
    try {
        const payload = JSON.parse(saved) as api.SessionCreated;
        view = state.newSession(payload);
        draw();
        return true;
    } catch {
        return false;
    }
}

if (!resume()) {
    void startSession();
}
