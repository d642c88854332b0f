/**
 * Full round trips against a mocked service: the fetch layer is replaced by
 * a scripted fake that mimics the real endpoints' payloads and scoring.
 */

import { afterEach, describe, expect, it, vi } from 'vitest';

import * as api from '../src/api.js';
import * as state from '../src/state.js';

function jsonResponse(status: number, body: unknown): Response {
    return new Response(JSON.stringify(body), {
        status,
        headers: { 'Content-Type': 'application/json' },
    });
}

afterEach(() => {
    vi.unstubAllGlobals();
});

function stubService() {
    let streak = 0;
    const truth = ['k', 'r'];
    const fetchMock = vi.fn(async (input: RequestInfo | URL, init?: RequestInit) => {
        const url = String(input);
        if (url === '/session' && init?.method === 'POST') {
            return jsonResponse(200, {
                session_id: 's1',
                sequence: ['w', '_', 'A', '_'],
                hidden: [1, 3],
            });
        }
        if (url === '/session/s1/answer') {
            const { answers } = JSON.parse(String(init?.body)) as { answers: string[] };
            if (answers.length !== truth.length) {
                return jsonResponse(400, { error: { code: 'arity_mismatch',
                                                    message: 'bad arity' } });
            }
            const correct = answers.every((a, i) => a === truth[i]);
            let switched = false;
            if (correct) {
                streak += 1;
                if (streak === 10) {
                    streak = 0;
                    switched = true;
                }
            } else {
                streak = 0;
            }
            return jsonResponse(200, {
                correct,
                revealed: ['w', 'k', 'A', 'r'],
                streak,
                next_sequence: ['w', '_', 'A', '_'],
                next_hidden: [1, 3],
                task_switched: switched,
            });
        }
        if (url === '/session/s1/score') {
            return jsonResponse(200, { curve: [[1, 1.0]], wade: 1.0 });
        }
        return jsonResponse(404, { error: { code: 'session_not_found',
                                            message: 'unknown' } });
    });
    vi.stubGlobal('fetch', fetchMock);
    return fetchMock;
}

describe('wrong-answer round trip', () => {
    it('displays the revealed valid sequence and a streak of 0', async () => {
        stubService();
        let view = state.newSession(await api.createSession());
        view = state.setInput(view, 0, 'x');
        view = state.setInput(view, 1, 'y');
        expect(state.canSubmit(view)).toBe(true);
        view = state.applyAnswer(view, await api.submitAnswers(view.sessionId, view.inputs));
        expect(view.lastVerdict).toBe('wrong');
        expect(view.revealed).toEqual(['w', 'k', 'A', 'r']);
        expect(view.streak).toBe(0);
    });
});

describe('ten-correct round trip', () => {
    it('fetches and displays the final WADE from /score', async () => {
        const fetchMock = stubService();
        let view = state.newSession(await api.createSession());
        for (let question = 0; question < 10; question += 1) {
            view = state.setInput(view, 0, 'k');
            view = state.setInput(view, 1, 'r');
            view = state.applyAnswer(view,
                await api.submitAnswers(view.sessionId, view.inputs));
        }
        expect(view.completed).toBe(true);
        view = state.applyScore(view, await api.fetchScore(view.sessionId));
        expect(view.finalWade).toBe(1.0);
        const scoreCalls = fetchMock.mock.calls.filter(
            ([input]) => String(input).endsWith('/score'));
        expect(scoreCalls).toHaveLength(1);
    });
});

describe('error payloads', () => {
    it('surfaces stable error codes from the service', async () => {
        stubService();
        await expect(api.submitAnswers('s1', ['only-one']))
            .rejects.toMatchObject({ code: 'arity_mismatch', status: 400 });
        await expect(api.fetchScore('nope'))
            .rejects.toMatchObject({ code: 'session_not_found', status: 404 });
    });
});
