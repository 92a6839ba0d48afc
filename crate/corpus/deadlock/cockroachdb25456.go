// source: cockroachdb#25456 (minimal reconstruction)
// expected: deadlock
//
// The consistency checker waits for the stopper to quiesce, but nothing
// ever signals the quiesce channel.
package main

type Stopper struct {
	quiescer chan struct{}
}

func (s *Stopper) ShouldQuiesce() chan struct{} {
	return s.quiescer
}

func main() {
	stopper := &Stopper{quiescer: make(chan struct{})}
	<-stopper.ShouldQuiesce()
}
