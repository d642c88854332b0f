/**
 * Pure view-model for an evaluation session.
 *
 * Every mutation is a function from (view, server payload) to a new view, so
 * the display logic is testable without a DOM.  Scores are never computed
 * here: the WADE value always comes from the service's /score endpoint.
 */

import { AnswerReply, ScorePayload, SessionCreated } from './api.js';

export type Verdict = 'correct' | 'wrong' | null;

export interface SessionView {
    sessionId: string;
    sequence: string[];          // tokens currently shown, '_' at blanks
    hidden: number[];            // blank positions awaiting answers
    inputs: string[];            // one in-progress answer per blank
    questionNumber: number;      // 1-based, as counted by the protocol
    streak: number;
    lastVerdict: Verdict;
    revealed: string[] | null;   // previous question's true sequence
    taskSwitched: boolean;       // a new task (and letter mapping) just began
    completed: boolean;          // the last answer finished a 10-streak
    finalWade: number | null;    // from /score, shown on completion
    curve: [number, number][];
    error: string | null;
}

export function newSession(created: SessionCreated): SessionView {
    return {
        sessionId: created.session_id,
        sequence: created.sequence,
        hidden: created.hidden,
        inputs: created.hidden.map(() => ''),
        questionNumber: 1,
        streak: 0,
        lastVerdict: null,
        revealed: null,
        taskSwitched: false,
        completed: false,
        finalWade: null,
        curve: [],
        error: null,
    };
}

export function setInput(view: SessionView, slot: number, value: string): SessionView {
    const inputs = view.inputs.slice();
    inputs[slot] = value;
    return { ...view, inputs };
}

/** Submission stays disabled until every blank has an answer. */
export function canSubmit(view: SessionView): boolean {
    return !view.completed && view.inputs.every((v) => v.trim().length > 0);
}

export function applyAnswer(view: SessionView, reply: AnswerReply): SessionView {
    return {
        ...view,
        sequence: reply.next_sequence,
        hidden: reply.next_hidden,
        inputs: reply.next_hidden.map(() => ''),
        questionNumber: view.questionNumber + 1,
        streak: reply.streak,
        lastVerdict: reply.correct ? 'correct' : 'wrong',
        revealed: reply.revealed,
        taskSwitched: reply.task_switched,
        completed: reply.correct && reply.task_switched,
        error: null,
    };
}

export function applyScore(view: SessionView, score: ScorePayload): SessionView {
    return { ...view, finalWade: score.wade, curve: score.curve };
}

export function setError(view: SessionView, message: string): SessionView {
    return { ...view, error: message };
}

/** Resume after a task switch: scoring continues, the banner clears. */
export function acknowledgeTaskSwitch(view: SessionView): SessionView {
    return { ...view, taskSwitched: false, completed: false };
}
