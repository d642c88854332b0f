/**
 * DOM rendering for the session view.
 *
 * Keyboard-first: typing fills the active blank, Tab/Enter moves on, and
 * Enter on the last filled blank submits.  The sequence is rendered as
 * plain token chips with input slots exactly at the service-declared
 * hidden positions.
 */

import { SessionView, canSubmit } from './state.js';

export interface UiHandlers {
    onInput(slot: number, value: string): void;
    onSubmit(): void;
    onNewSession(): void;
}

function el(tag: string, className: string, text?: string): HTMLElement {
    const node = document.createElement(tag);
    node.className = className;
    if (text !== undefined) {
        node.textContent = text;
    }
    return node;
}

export function render(root: HTMLElement, view: SessionView, handlers: UiHandlers): void {
    root.replaceChildren();

    const status = el('div', 'status-bar');
    status.append(
        el('span', 'question', `question ${view.questionNumber}`),
        el('span', 'streak', `streak ${view.streak} / 10`),
    );
    root.append(status);

    if (view.error) {
        const banner = el('div', 'banner error', `service error: ${view.error} `);
        const retry = el('button', 'retry', 'retry') as HTMLButtonElement;
        retry.addEventListener('click', handlers.onNewSession);
        banner.append(retry);
        root.append(banner);
    }

    if (view.lastVerdict !== null) {
        root.append(el('div', `banner verdict ${view.lastVerdict}`,
            view.lastVerdict === 'correct' ? 'correct' : 'wrong'));
    }
    if (view.revealed !== null) {
        const revealed = el('div', 'revealed');
        revealed.append(el('span', 'label', 'the valid sequence was: '));
        revealed.append(el('span', 'tokens', view.revealed.join(' ')));
        root.append(revealed);
    }
    if (view.completed) {
        const done = el('div', 'banner completed',
            view.finalWade === null
                ? 'ten in a row! fetching your WADE score...'
                : `ten in a row! final WADE ${view.finalWade}`);
        root.append(done);
    }
    if (view.taskSwitched) {
        root.append(el('div', 'banner task-switch',
            'new task: the letter mapping has been redrawn'));
    }

    const sequence = el('div', 'sequence');
    let slot = 0;
    view.sequence.forEach((token, position) => {
        if (view.hidden.includes(position)) {
            const input = el('input', 'blank') as HTMLInputElement;
            const index = slot;
            input.value = view.inputs[index];
            input.size = 4;
            input.dataset.slot = String(index);
            input.addEventListener('input', () => handlers.onInput(index, input.value));
            input.addEventListener('keydown', (event) => {
                if (event.key === 'Enter' && canSubmit(view)) {
                    handlers.onSubmit();
                }
            });
            sequence.append(input);
            slot += 1;
        } else {
            sequence.append(el('span', 'token', token));
        }
    });
    root.append(sequence);

    const submit = el('button', 'submit', 'submit') as HTMLButtonElement;
    submit.disabled = !canSubmit(view);
    submit.addEventListener('click', handlers.onSubmit);
    root.append(submit);

    if (view.curve.length > 0) {
        root.append(renderScorePanel(view));
    }

    const firstBlank = root.querySelector('input.blank') as HTMLInputElement | null;
    if (firstBlank && !view.completed) {
        firstBlank.focus();
    }
}

/** Inline accuracy-curve chart: one bar per completed streak. */
function renderScorePanel(view: SessionView): HTMLElement {
    const panel = el('div', 'score-panel');
    panel.append(el('div', 'label', view.finalWade === null
        ? 'completed streaks'
        : `completed streaks (WADE ${view.finalWade})`));
    const chart = el('div', 'chart');
    for (const [question, accuracy] of view.curve) {
        const bar = el('div', 'bar');
        bar.style.height = `${Math.round(accuracy * 48)}px`;
        bar.title = `question ${question}: ${Math.round(accuracy * 100)}%`;
        chart.append(bar);
    }
    panel.append(chart);
    return panel;
}
