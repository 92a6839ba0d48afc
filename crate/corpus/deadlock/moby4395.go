// source: moby#4395 (reconstruction of the leaking caller)
// expected: deadlock
//
// The helper returns a channel fed by a goroutine; this caller drops the
// channel, so the goroutine blocks on its send forever.
package main

type Error interface{}

func run(f func() Error) chan Error {
	ch := make(chan Error)
	go func() {
		ch <- f()
	}()
	return ch
}

func main() {
	run(func() Error { return nil })
}
